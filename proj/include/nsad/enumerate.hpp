#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nsad/relu_net.hpp"

namespace nsad {

// Per hidden layer: the enforced diagonal (1 for identity / strictly positive
// relu, 0 for strictly negative relu) and the indices of the free coordinates
// (relu inputs exactly zero).
struct SplitActivations {
    std::vector<std::vector<Rat>> fixed_diag;
    std::vector<std::vector<int>> variable_coords;

    int variable_count() const;
};

SplitActivations split_activations(const ReluNetwork& net, const std::vector<Rat>& x);

enum class WitnessBranch : uint8_t { None, PathVertex, Randomized };

// Outcome of the singleton decision. On TwoElements, e1 is the all-zero-choice
// element, e2 a provably distinct one, `path` the source-to-sink witness in the
// layered reachability graph as (layer, variable ordinal) pairs with layer 0
// the output-coordinate selector, and `choices2` reproduces e2 through
// autodiff_element.
struct EnumVerdict {
    bool singleton = true;
    std::vector<Rat> e1;
    std::vector<Rat> e2;
    std::vector<std::pair<int, int>> path;
    std::vector<Rat> choices2;
    WitnessBranch branch = WitnessBranch::None;
    uint64_t seed = 0;

    // instrumentation
    int graph_nodes = 0;
    long long matrix_products = 0;
};

// Polynomial-time decision of whether the autodiff conservative gradient at x
// is a singleton, with a distinct second element when it is not. Exact
// arithmetic throughout; the seed only feeds the randomized fallback.
EnumVerdict decide_singleton(const ReluNetwork& net, const std::vector<Rat>& x,
                             uint64_t seed = 0);

// All vertices { autodiff_element(net, x, c) : c in {0,1}^variables },
// deduplicated, sorted lexicographically. Throws BudgetExceeded when the
// variable count exceeds `budget`.
std::vector<std::vector<Rat>> brute_force_vertices(const ReluNetwork& net,
                                                   const std::vector<Rat>& x,
                                                   int budget = 20);

} // namespace nsad
