#include "nsad/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "nsad/errors.hpp"

namespace nsad {

int SplitActivations::variable_count() const {
    int n = 0;
    for (const auto& v : variable_coords) n += static_cast<int>(v.size());
    return n;
}

namespace {

// Enforced diagonal entries (the choice at zero activations rides separately).
SplitActivations split_from_pattern(const ActivationPattern& pattern) {
    SplitActivations split;
    split.fixed_diag.reserve(pattern.layers.size());
    split.variable_coords.reserve(pattern.layers.size());
    for (const auto& layer : pattern.layers) {
        std::vector<Rat> diag(layer.size());
        std::vector<int> vars;
        for (size_t c = 0; c < layer.size(); ++c) {
            switch (layer[c]) {
                case SignClass::Identity:
                case SignClass::Pos:
                    diag[c] = 1;
                    break;
                case SignClass::Neg:
                    diag[c] = 0;
                    break;
                case SignClass::Zero:
                    diag[c] = 0;
                    vars.push_back(static_cast<int>(c));
                    break;
            }
        }
        split.fixed_diag.push_back(std::move(diag));
        split.variable_coords.push_back(std::move(vars));
    }
    return split;
}

} // namespace

SplitActivations split_activations(const ReluNetwork& net, const std::vector<Rat>& x) {
    return split_from_pattern(net_eval(net, x).pattern);
}

namespace {

// Node ids in the layered reachability graph: 0 = source, then the p output
// selector nodes, then the variable coordinates layer by layer, sink last.
struct GraphLayout {
    int p = 0;
    std::vector<int> offsets; // offsets[m] = first id of layer m's variables
    int sink = 0;

    int id_layer0(int c) const { return 1 + c; }
    int id_var(int layer, int ordinal) const {
        return offsets[static_cast<size_t>(layer - 1)] + ordinal;
    }
};

} // namespace

EnumVerdict decide_singleton(const ReluNetwork& net, const std::vector<Rat>& x,
                             uint64_t seed) {
    net.validate();
    if (net.output_dim() != 1)
        throw DimensionError("singleton decision requires a single-output network");
    NetEval ev = net_eval(net, x);
    const ActivationPattern& pattern = ev.pattern;
    SplitActivations split = split_from_pattern(pattern);
    const int total_vars = split.variable_count();

    EnumVerdict verdict;
    verdict.seed = seed;
    verdict.e1 = autodiff_element(net, pattern,
                                  std::vector<Rat>(static_cast<size_t>(total_vars), Rat(0)));
    if (total_vars == 0) return verdict;

    const int L = net.layer_count();
    const int p = net.input_dim();

    // Doubled chain: hop matrices H[0..L] in transposed form and the enforced
    // diagonals F[0..L-1]. The bottom block carries the all-zero-choice
    // product, so constant terms cancel along every source-to-sink route.
    std::vector<RatMat> hop(static_cast<size_t>(L) + 1);
    std::vector<std::vector<Rat>> fixed(static_cast<size_t>(L));
    hop[0] = RatMat(1, p);
    for (int c = 0; c < p; ++c) hop[0].at(0, c) = 1;
    fixed[0].assign(static_cast<size_t>(p), Rat(0));
    for (int m = 1; m <= L; ++m) {
        RatMat t = net.mats[static_cast<size_t>(m - 1)].transpose();
        if (m == 1 && L >= 2)
            hop[1] = hstack(t, negate(t));
        else if (m == L)
            hop[static_cast<size_t>(m)] = L >= 2 ? vstack(t, t) : t;
        else
            hop[static_cast<size_t>(m)] = block_diag(t, t);
        if (m <= L - 1) {
            const auto& d = split.fixed_diag[static_cast<size_t>(m - 1)];
            auto& f = fixed[static_cast<size_t>(m)];
            f.resize(2 * d.size());
            for (size_t c = 0; c < d.size(); ++c) {
                f[c] = d[c];
                f[d.size() + c] = d[c];
            }
        }
    }

    GraphLayout layout;
    layout.p = p;
    layout.offsets.resize(static_cast<size_t>(L - 1));
    int next_id = 1 + p;
    for (int m = 1; m <= L - 1; ++m) {
        layout.offsets[static_cast<size_t>(m - 1)] = next_id;
        next_id += static_cast<int>(split.variable_coords[static_cast<size_t>(m - 1)].size());
    }
    layout.sink = next_id;
    verdict.graph_nodes = next_id + 1;

    std::vector<std::vector<int>> adj(static_cast<size_t>(next_id) + 1);
    auto rows_of_layer = [&](int i) {
        std::vector<std::pair<int, int>> rows; // (node id, row index into R)
        if (i == -1) {
            rows.emplace_back(0, 0);
        } else if (i == 0) {
            for (int c = 0; c < p; ++c) rows.emplace_back(layout.id_layer0(c), c);
        } else {
            const auto& vars = split.variable_coords[static_cast<size_t>(i - 1)];
            for (size_t k = 0; k < vars.size(); ++k)
                rows.emplace_back(layout.id_var(i, static_cast<int>(k)), vars[k]);
        }
        return rows;
    };
    auto cols_of_layer = [&](int j) {
        std::vector<std::pair<int, int>> cols;
        if (j == L) {
            cols.emplace_back(layout.sink, 0);
        } else if (j == 0) {
            for (int c = 0; c < p; ++c) cols.emplace_back(layout.id_layer0(c), c);
        } else {
            const auto& vars = split.variable_coords[static_cast<size_t>(j - 1)];
            for (size_t k = 0; k < vars.size(); ++k)
                cols.emplace_back(layout.id_var(j, static_cast<int>(k)), vars[k]);
        }
        return cols;
    };

    for (int i = -1; i <= L - 1; ++i) {
        auto rows = rows_of_layer(i);
        if (rows.empty()) continue;
        RatMat r = hop[static_cast<size_t>(i + 1)];
        for (int j = i + 1; j <= L; ++j) {
            for (const auto& [rid, rrow] : rows) {
                for (const auto& [cid, ccol] : cols_of_layer(j)) {
                    if (r.at(rrow, ccol) != 0) adj[static_cast<size_t>(rid)].push_back(cid);
                }
            }
            if (j < L) {
                r = mul_diag(r, fixed[static_cast<size_t>(j)]);
                r = mat_mul(r, hop[static_cast<size_t>(j + 1)]);
                verdict.matrix_products += 2;
            }
        }
    }

    // BFS source -> sink.
    std::vector<int> parent(static_cast<size_t>(next_id) + 1, -2);
    std::deque<int> queue;
    queue.push_back(0);
    parent[0] = -1;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        if (u == layout.sink) break;
        for (int v : adj[static_cast<size_t>(u)]) {
            if (parent[static_cast<size_t>(v)] == -2) {
                parent[static_cast<size_t>(v)] = u;
                queue.push_back(v);
            }
        }
    }
    if (parent[static_cast<size_t>(layout.sink)] == -2) return verdict; // singleton

    verdict.singleton = false;
    for (int u = parent[static_cast<size_t>(layout.sink)]; u > 0;
         u = parent[static_cast<size_t>(u)]) {
        if (u <= p) {
            verdict.path.emplace_back(0, u - 1);
        } else {
            for (int m = L - 1; m >= 1; --m) {
                int off = layout.offsets[static_cast<size_t>(m - 1)];
                int count =
                    static_cast<int>(split.variable_coords[static_cast<size_t>(m - 1)].size());
                if (u >= off && u < off + count) {
                    verdict.path.emplace_back(m, u - off);
                    break;
                }
            }
        }
    }
    std::reverse(verdict.path.begin(), verdict.path.end());

    // Global choice index of each path variable (layer-major order, matching
    // autodiff_element's choice indexing).
    std::vector<int> layer_offset(static_cast<size_t>(L - 1), 0);
    {
        int acc = 0;
        for (int m = 1; m <= L - 1; ++m) {
            layer_offset[static_cast<size_t>(m - 1)] = acc;
            acc += static_cast<int>(split.variable_coords[static_cast<size_t>(m - 1)].size());
        }
    }
    std::vector<int> path_vars;
    for (const auto& [layer, ordinal] : verdict.path)
        if (layer >= 1)
            path_vars.push_back(layer_offset[static_cast<size_t>(layer - 1)] + ordinal);

    // Restrict the difference polynomial to the path variables and check the
    // vertex assignments; the full-path monomial has a nonzero coefficient, so
    // some vertex evaluates away from e1.
    const int r = static_cast<int>(path_vars.size());
    for (long long mask = (1LL << r) - 1; mask >= 1; --mask) {
        std::vector<Rat> choices(static_cast<size_t>(total_vars), Rat(0));
        for (int t = 0; t < r; ++t)
            if (mask & (1LL << t)) choices[static_cast<size_t>(path_vars[t])] = 1;
        std::vector<Rat> cand = autodiff_element(net, pattern, choices);
        if (cand != verdict.e1) {
            verdict.e2 = std::move(cand);
            verdict.choices2 = std::move(choices);
            verdict.branch = WitnessBranch::PathVertex;
            return verdict;
        }
    }

    // Fallback: randomized evaluation over all variables at rationals with
    // denominator 2^16, then coordinate-wise rounding to a vertex.
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<Rat> choices(static_cast<size_t>(total_vars));
        for (auto& c : choices) c = Rat(Int(rng() & 0xFFFF), Int(65536));
        std::vector<Rat> cand = autodiff_element(net, pattern, choices);
        if (cand == verdict.e1) continue;
        // Affine in each variable, so one of {0, 1} keeps the difference
        // nonzero at every rounding step.
        for (int v = 0; v < total_vars; ++v) {
            choices[static_cast<size_t>(v)] = 0;
            if (autodiff_element(net, pattern, choices) != verdict.e1) continue;
            choices[static_cast<size_t>(v)] = 1;
        }
        cand = autodiff_element(net, pattern, choices);
        if (cand == verdict.e1)
            throw std::logic_error("vertex rounding lost the witness");
        verdict.e2 = std::move(cand);
        verdict.choices2 = std::move(choices);
        verdict.branch = WitnessBranch::Randomized;
        return verdict;
    }
    throw std::logic_error("randomized witness search exhausted its trial budget");
}

std::vector<std::vector<Rat>> brute_force_vertices(const ReluNetwork& net,
                                                   const std::vector<Rat>& x, int budget) {
    net.validate();
    NetEval ev = net_eval(net, x);
    const int vars = ev.pattern.zero_count();
    if (vars > budget)
        throw BudgetExceeded("vertex enumeration over 2^" + std::to_string(vars) +
                             " exceeds budget 2^" + std::to_string(budget));
    std::vector<std::vector<Rat>> out;
    out.reserve(1u << vars);
    for (long long mask = 0; mask < (1LL << vars); ++mask) {
        std::vector<Rat> choices(static_cast<size_t>(vars));
        for (int v = 0; v < vars; ++v)
            choices[static_cast<size_t>(v)] = (mask >> v) & 1 ? 1 : 0;
        out.push_back(autodiff_element(net, ev.pattern, choices));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace nsad
