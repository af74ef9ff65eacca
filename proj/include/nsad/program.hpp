#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nsad/op.hpp"

namespace nsad {

struct Program;

// One computation slot. Either a dictionary op or a reference to a nested
// single-output program; `pred` lists the 1-based indices feeding it.
struct ProgramNode {
    Op op;
    std::shared_ptr<const Program> sub; // set => nested program node
    std::string sub_name;               // stable reference name for serialization
    std::vector<int> pred;

    bool is_sub() const { return sub != nullptr; }

    static ProgramNode make(Op o, std::vector<int> pred_) {
        ProgramNode n;
        n.op = std::move(o);
        n.pred = std::move(pred_);
        return n;
    }
    static ProgramNode call(std::shared_ptr<const Program> s, std::string name,
                            std::vector<int> pred_) {
        ProgramNode n;
        n.sub = std::move(s);
        n.sub_name = std::move(name);
        n.pred = std::move(pred_);
        return n;
    }
};

// A straight-line program: input slots 1..p, computation slots p+1..m written
// once in index order, outputs the trailing q slots. Immutable after build.
struct Program {
    int inputs = 0;  // p
    int outputs = 1; // q
    std::vector<ProgramNode> nodes;

    int memory() const { return inputs + static_cast<int>(nodes.size()); } // m
    // Global 1-based index of computation node #idx (0-based into `nodes`).
    int node_index(int idx) const { return inputs + 1 + idx; }
    const ProgramNode& node_at(int global_index) const {
        return nodes[static_cast<size_t>(global_index - inputs - 1)];
    }
    int first_output_index() const { return memory() - outputs + 1; }

    bool level1() const; // no nested program nodes
};

// Validates the predecessor invariants and returns the finished program.
// Throws CycleError / ArityError / EmptyPredecessorError / DimensionError.
Program build_program(int p, int q, std::vector<ProgramNode> nodes);

// Expands nested program nodes until only dictionary ops remain. Preserves the
// input-output function and the cost under every scheme. Throws DimensionError
// when outputs cannot be kept in the trailing slots without recomputation
// (multi-output programs whose outputs feed later multi-node subprogram
// expansions).
Program flatten(const Program& program);

// Convenience builders used all over the tests.
Program single_op_program(const Op& op);

} // namespace nsad
