#include "nsad/program.hpp"

#include <numeric>
#include <sstream>

#include "nsad/errors.hpp"

namespace nsad {

bool Program::level1() const {
    for (const auto& n : nodes)
        if (n.is_sub()) return false;
    return true;
}

Program build_program(int p, int q, std::vector<ProgramNode> nodes) {
    if (p < 0) throw DimensionError("negative input count");
    if (q < 1) throw DimensionError("output count must be >= 1");
    if (static_cast<int>(nodes.size()) < q)
        throw DimensionError("memory size must satisfy m >= p + q");

    Program prog;
    prog.inputs = p;
    prog.outputs = q;
    prog.nodes = std::move(nodes);

    for (size_t idx = 0; idx < prog.nodes.size(); ++idx) {
        const int i = prog.node_index(static_cast<int>(idx));
        const ProgramNode& n = prog.nodes[idx];
        if (n.pred.empty())
            throw EmptyPredecessorError("computation node " + std::to_string(i) +
                                        " has empty predecessor list");
        for (int j : n.pred) {
            if (j >= i)
                throw CycleError("node " + std::to_string(i) + " references slot " +
                                 std::to_string(j) + " (needs j < i)");
            if (j < 1)
                throw DimensionError("node " + std::to_string(i) +
                                     " references slot " + std::to_string(j));
        }
        if (n.is_sub()) {
            if (n.sub->outputs != 1)
                throw MultiOutputError("nested program node " + std::to_string(i) +
                                       " must reference a single-output program");
            if (static_cast<int>(n.pred.size()) != n.sub->inputs)
                throw ArityError("node " + std::to_string(i) + " passes " +
                                 std::to_string(n.pred.size()) + " arguments to a " +
                                 std::to_string(n.sub->inputs) + "-input program");
        } else {
            n.op.validate();
            if (static_cast<int>(n.pred.size()) != n.op.arity)
                throw ArityError("node " + std::to_string(i) + " op " + n.op.name() +
                                 " expects " + std::to_string(n.op.arity) +
                                 " arguments, got " + std::to_string(n.pred.size()));
        }
    }
    return prog;
}

namespace {

// Emits the expansion of `prog` into `out`, with `arg_map` giving the new
// global indices of prog's input slots. Returns the new index of the output.
int expand_into(const Program& prog, const std::vector<int>& arg_map,
                std::vector<ProgramNode>& out, int new_inputs) {
    std::vector<int> local(prog.memory() + 1, 0);
    for (int j = 1; j <= prog.inputs; ++j) local[j] = arg_map[j - 1];
    int last = 0;
    for (size_t idx = 0; idx < prog.nodes.size(); ++idx) {
        const ProgramNode& n = prog.nodes[idx];
        std::vector<int> mapped;
        mapped.reserve(n.pred.size());
        for (int j : n.pred) mapped.push_back(local[j]);
        if (n.is_sub()) {
            last = expand_into(*n.sub, mapped, out, new_inputs);
        } else {
            out.push_back(ProgramNode::make(n.op, std::move(mapped)));
            last = new_inputs + static_cast<int>(out.size());
        }
        local[prog.node_index(static_cast<int>(idx))] = last;
    }
    return last;
}

} // namespace

Program flatten(const Program& program) {
    std::vector<ProgramNode> out;
    std::vector<int> images; // new global index of each original computation node
    std::vector<int> local(program.memory() + 1, 0);
    for (int j = 1; j <= program.inputs; ++j) local[j] = j;
    for (size_t idx = 0; idx < program.nodes.size(); ++idx) {
        const ProgramNode& n = program.nodes[idx];
        std::vector<int> mapped;
        mapped.reserve(n.pred.size());
        for (int j : n.pred) mapped.push_back(local[j]);
        int image;
        if (n.is_sub()) {
            image = expand_into(*n.sub, mapped, out, program.inputs);
        } else {
            out.push_back(ProgramNode::make(n.op, std::move(mapped)));
            image = program.inputs + static_cast<int>(out.size());
        }
        local[program.node_index(static_cast<int>(idx))] = image;
        images.push_back(image);
    }

    const int q = program.outputs;
    const int new_m = program.inputs + static_cast<int>(out.size());
    std::vector<int> output_images(images.end() - q, images.end());

    bool trailing = true;
    for (int t = 0; t < q; ++t)
        if (output_images[t] != new_m - q + 1 + t) trailing = false;

    if (!trailing) {
        // Move the output images into the trailing slots, keeping everything
        // else in emission order. Legal only when no interior node reads an
        // output image.
        std::vector<bool> is_output(out.size() + 1, false);
        for (int img : output_images) is_output[img - program.inputs] = true;
        std::vector<int> perm(program.inputs + 1, 0); // old new-index -> final index
        std::iota(perm.begin(), perm.end(), 0);
        perm.resize(new_m + 1, 0);
        int next = program.inputs + 1;
        for (int i = program.inputs + 1; i <= new_m; ++i)
            if (!is_output[i - program.inputs]) perm[i] = next++;
        for (int img : output_images) perm[img] = next++;
        std::vector<ProgramNode> reordered(out.size());
        for (int i = program.inputs + 1; i <= new_m; ++i) {
            ProgramNode n = out[static_cast<size_t>(i - program.inputs - 1)];
            for (int& j : n.pred) {
                int pj = j <= program.inputs ? j : perm[j];
                if (pj >= perm[i] && !is_output[i - program.inputs])
                    throw DimensionError(
                        "flatten cannot keep outputs in trailing slots: interior "
                        "node depends on an output");
                if (pj >= perm[i])
                    throw DimensionError(
                        "flatten cannot keep outputs in trailing slots without "
                        "recomputation");
                j = pj;
            }
            reordered[static_cast<size_t>(perm[i] - program.inputs - 1)] = std::move(n);
        }
        out = std::move(reordered);
    }

    return build_program(program.inputs, q, std::move(out));
}

Program single_op_program(const Op& op) {
    std::vector<int> pred(op.arity);
    std::iota(pred.begin(), pred.end(), 1);
    return build_program(op.arity, 1, {ProgramNode::make(op, pred)});
}

} // namespace nsad
