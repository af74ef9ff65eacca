#include "nsad/relu_net.hpp"

#include <algorithm>

#include "nsad/errors.hpp"

namespace nsad {

Int ReluNetwork::representation_size() const {
    const auto& out = mats.back();
    Int size = Int(out.rows) * out.cols;
    for (size_t l = 0; l + 1 < mats.size(); ++l)
        size += Int(mats[l].rows) * mats[l].cols + mats[l].rows;
    return size;
}

int ReluNetwork::relu_count() const {
    int n = 0;
    for (const auto& mask : masks)
        for (uint8_t f : mask) n += f ? 1 : 0;
    return n;
}

bool ReluNetwork::ternary() const {
    for (const auto& m : mats)
        for (const Rat& v : m.a)
            if (v != 0 && v != 1 && v != -1) return false;
    return true;
}

void ReluNetwork::validate() const {
    if (mats.empty()) throw DimensionError("network needs at least one matrix");
    if (masks.size() + 1 != mats.size())
        throw DimensionError("network needs exactly L-1 activation masks");
    for (size_t l = 0; l + 1 < mats.size(); ++l) {
        if (mats[l + 1].cols != mats[l].rows)
            throw DimensionError("matrix dimension chain broken at layer " +
                                 std::to_string(l + 1));
        if (static_cast<int>(masks[l].size()) != mats[l].rows)
            throw DimensionError("mask length mismatch at layer " + std::to_string(l + 1));
    }
}

int ActivationPattern::zero_count() const {
    int n = 0;
    for (const auto& layer : layers)
        for (SignClass s : layer) n += s == SignClass::Zero ? 1 : 0;
    return n;
}

NetEval net_eval(const ReluNetwork& net, const std::vector<Rat>& x) {
    net.validate();
    if (static_cast<int>(x.size()) != net.input_dim())
        throw DimensionError("input length does not match network input dimension");
    NetEval res;
    std::vector<Rat> v = x;
    for (size_t l = 0; l < net.mats.size(); ++l) {
        v = mat_vec(net.mats[l], v);
        if (l + 1 == net.mats.size()) break;
        std::vector<SignClass> signs(v.size());
        for (size_t c = 0; c < v.size(); ++c) {
            if (!net.masks[l][c]) {
                signs[c] = SignClass::Identity;
            } else if (v[c] > 0) {
                signs[c] = SignClass::Pos;
            } else if (v[c] < 0) {
                signs[c] = SignClass::Neg;
                v[c] = 0;
            } else {
                signs[c] = SignClass::Zero;
            }
        }
        res.pattern.layers.push_back(std::move(signs));
    }
    res.output = std::move(v);
    return res;
}

std::vector<Rat> autodiff_element(const ReluNetwork& net, const std::vector<Rat>& x,
                                  const std::vector<Rat>& zero_choices) {
    return autodiff_element(net, net_eval(net, x).pattern, zero_choices);
}

std::vector<Rat> autodiff_element(const ReluNetwork& net, const ActivationPattern& pattern,
                                  const std::vector<Rat>& zero_choices) {
    net.validate();
    if (net.output_dim() != 1)
        throw DimensionError("autodiff element requires a single-output network");
    size_t want = 0;
    for (const auto& layer : pattern.layers)
        for (SignClass s : layer) want += s == SignClass::Zero ? 1 : 0;
    if (zero_choices.size() != want)
        throw IndexMismatch("expected " + std::to_string(want) + " zero choices, got " +
                            std::to_string(zero_choices.size()));
    for (const Rat& c : zero_choices)
        if (c < 0 || c > 1) throw ChoiceOutOfRange("zero choice outside [0,1]");

    // Diagonal entries per hidden layer, consuming choices in layer-major order.
    const int L = net.layer_count();
    std::vector<std::vector<Rat>> diag(static_cast<size_t>(L - 1));
    size_t next_choice = 0;
    for (int l = 0; l < L - 1; ++l) {
        const auto& layer = pattern.layers[static_cast<size_t>(l)];
        diag[static_cast<size_t>(l)].resize(layer.size());
        for (size_t c = 0; c < layer.size(); ++c) {
            switch (layer[c]) {
                case SignClass::Identity:
                case SignClass::Pos:
                    diag[static_cast<size_t>(l)][c] = 1;
                    break;
                case SignClass::Neg:
                    diag[static_cast<size_t>(l)][c] = 0;
                    break;
                case SignClass::Zero:
                    diag[static_cast<size_t>(l)][c] = zero_choices[next_choice++];
                    break;
            }
        }
    }

    // v = M_L^T, then repeatedly v := M_i^T (D_i v).
    const RatMat& last = net.mats[static_cast<size_t>(L - 1)];
    std::vector<Rat> v(static_cast<size_t>(last.cols));
    for (int c = 0; c < last.cols; ++c) v[static_cast<size_t>(c)] = last.at(0, c);
    for (int l = L - 2; l >= 0; --l) {
        const auto& d = diag[static_cast<size_t>(l)];
        for (size_t c = 0; c < v.size(); ++c) v[c] *= d[c];
        const RatMat& m = net.mats[static_cast<size_t>(l)];
        std::vector<Rat> nv(static_cast<size_t>(m.cols));
        for (int r = 0; r < m.rows; ++r) {
            const Rat& vr = v[static_cast<size_t>(r)];
            if (vr == 0) continue;
            for (int c = 0; c < m.cols; ++c) {
                const Rat& mv = m.at(r, c);
                if (mv != 0) nv[static_cast<size_t>(c)] += mv * vr;
            }
        }
        v = std::move(nv);
    }
    return v;
}

NetFromProgram net_from_program(const Program& program) {
    Program prog = program.level1() ? program : flatten(program);
    if (prog.outputs != 1)
        throw MultiOutputError("network encoding requires a single-output program");
    for (const auto& n : prog.nodes)
        if (!in_d0_dictionary(n.op))
            throw UnsupportedOpError("network encoding only supports {add, sub, relu}, got " +
                                     n.op.name());

    // Prune inputs that no node reads.
    std::vector<bool> used(static_cast<size_t>(prog.inputs) + 1, false);
    for (const auto& n : prog.nodes)
        for (int j : n.pred)
            if (j <= prog.inputs) used[static_cast<size_t>(j)] = true;
    NetFromProgram out;
    std::vector<int> slot_map(static_cast<size_t>(prog.memory()) + 1, 0);
    for (int j = 1; j <= prog.inputs; ++j) {
        if (used[static_cast<size_t>(j)]) {
            out.kept_inputs.push_back(j);
            slot_map[static_cast<size_t>(j)] =
                static_cast<int>(out.kept_inputs.size()) - 1; // 0-based pruned slot
        }
    }
    const int p = static_cast<int>(out.kept_inputs.size());
    const int cost = static_cast<int>(prog.nodes.size());
    const int m = p + cost;
    for (size_t idx = 0; idx < prog.nodes.size(); ++idx)
        slot_map[static_cast<size_t>(prog.node_index(static_cast<int>(idx)))] =
            p + static_cast<int>(idx);

    // One m x m layer per operation; the first is folded with the input
    // embedding, the output selector reads the last slot.
    for (int t = 0; t < cost; ++t) {
        const ProgramNode& n = prog.nodes[static_cast<size_t>(t)];
        const int row = slot_map[static_cast<size_t>(prog.node_index(t))];
        RatMat a = RatMat::identity(m);
        for (int c = 0; c < m; ++c) a.at(row, c) = 0;
        const int j0 = slot_map[static_cast<size_t>(n.pred[0])];
        switch (n.op.kind) {
            case OpKind::Add:
                a.at(row, j0) += 1;
                a.at(row, slot_map[static_cast<size_t>(n.pred[1])]) += 1;
                break;
            case OpKind::Sub:
                a.at(row, j0) += 1;
                a.at(row, slot_map[static_cast<size_t>(n.pred[1])]) -= 1;
                break;
            case OpKind::Relu:
                a.at(row, j0) = 1;
                break;
            default:
                throw UnsupportedOpError("unreachable");
        }
        if (t == 0) {
            RatMat first(m, p);
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < p; ++c) first.at(r, c) = a.at(r, c);
            out.net.mats.push_back(std::move(first));
        } else {
            out.net.mats.push_back(std::move(a));
        }
        std::vector<uint8_t> mask(static_cast<size_t>(m), 0);
        if (n.op.kind == OpKind::Relu) mask[static_cast<size_t>(row)] = 1;
        out.net.masks.push_back(std::move(mask));
    }
    RatMat selector(1, m);
    selector.at(0, m - 1) = 1;
    out.net.mats.push_back(std::move(selector));
    out.net.validate();
    return out;
}

namespace {

// Builds sum_{t} sign_t * slot_t with add/sub nodes; returns the slot holding
// the result. `zero` lazily materializes a zero-valued slot.
struct ProgramBuilder {
    int inputs;
    std::vector<ProgramNode> nodes;
    int zero_slot = 0;

    int next_index() const { return inputs + static_cast<int>(nodes.size()) + 1; }

    int emit(Op op, std::vector<int> pred) {
        nodes.push_back(ProgramNode::make(std::move(op), std::move(pred)));
        return inputs + static_cast<int>(nodes.size());
    }

    int zero() {
        if (!zero_slot) zero_slot = emit(Op::sub(), {1, 1});
        return zero_slot;
    }

    int combination(const std::vector<std::pair<int, int>>& terms) { // (sign, slot)
        if (terms.empty()) return zero();
        size_t start = terms.size();
        for (size_t t = 0; t < terms.size(); ++t)
            if (terms[t].first > 0) { start = t; break; }
        if (start == terms.size()) {
            // All negative: accumulate magnitudes, then subtract from zero.
            int acc = terms[0].second;
            for (size_t t = 1; t < terms.size(); ++t)
                acc = emit(Op::add(), {acc, terms[t].second});
            return emit(Op::sub(), {zero(), acc});
        }
        int acc = terms[start].second;
        for (size_t t = 0; t < terms.size(); ++t) {
            if (t == start) continue;
            acc = emit(terms[t].first > 0 ? Op::add() : Op::sub(), {acc, terms[t].second});
        }
        return acc;
    }
};

} // namespace

Program program_from_net(const ReluNetwork& net) {
    net.validate();
    if (!net.ternary()) throw NonTernaryWeightError("network weights must lie in {-1,0,1}");
    if (net.input_dim() < 1) throw DimensionError("network needs at least one input");

    ProgramBuilder b{net.input_dim(), {}, 0};
    std::vector<int> cur(static_cast<size_t>(net.input_dim()));
    for (int j = 0; j < net.input_dim(); ++j) cur[static_cast<size_t>(j)] = j + 1;

    const int L = net.layer_count();
    for (int l = 0; l < L; ++l) {
        const RatMat& mat = net.mats[static_cast<size_t>(l)];
        std::vector<int> next(static_cast<size_t>(mat.rows));
        for (int r = 0; r < mat.rows; ++r) {
            std::vector<std::pair<int, int>> terms;
            for (int c = 0; c < mat.cols; ++c) {
                const Rat& w = mat.at(r, c);
                if (w == 0) continue;
                terms.emplace_back(w > 0 ? 1 : -1, cur[static_cast<size_t>(c)]);
            }
            int slot;
            if (terms.size() == 1 && terms[0].first > 0) {
                slot = terms[0].second; // plain pass-through, no op needed
            } else {
                slot = b.combination(terms);
            }
            if (l < L - 1 && net.masks[static_cast<size_t>(l)][static_cast<size_t>(r)])
                slot = b.emit(Op::relu(), {slot});
            next[static_cast<size_t>(r)] = slot;
        }
        cur = std::move(next);
    }

    // Outputs must land in the trailing slots in order; copy via x + 0 unless a
    // single output already sits at the end.
    const int h = net.output_dim();
    bool already_trailing = h == 1 && cur[0] == b.inputs + static_cast<int>(b.nodes.size()) &&
                            cur[0] > b.inputs;
    if (!already_trailing) {
        int z = b.zero();
        std::vector<int> outs(cur.begin(), cur.end());
        for (int r = 0; r < h; ++r) b.emit(Op::add(), {outs[static_cast<size_t>(r)], z});
    }
    return build_program(b.inputs, h, std::move(b.nodes));
}

} // namespace nsad
