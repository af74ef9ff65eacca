#pragma once

#include <cstdint>
#include <vector>

#include "nsad/linalg.hpp"
#include "nsad/program.hpp"

namespace nsad {

// Linear ReLU network with skip connections:
//   F(x) = M_L Phi_{L-1}( M_{L-1} Phi_{L-2}( ... Phi_1(M_1 x) ) )
// mats[l] is M_{l+1}; masks[i][c] = 1 applies ReLU to coordinate c of layer
// i+1, 0 leaves it alone (skip connection).
struct ReluNetwork {
    std::vector<RatMat> mats;
    std::vector<std::vector<uint8_t>> masks;

    int layer_count() const { return static_cast<int>(mats.size()); } // L
    int input_dim() const { return mats.empty() ? 0 : mats.front().cols; }
    int output_dim() const { return mats.empty() ? 0 : mats.back().rows; }
    int hidden_dim(int i) const { return mats[static_cast<size_t>(i)].rows; } // p_{i+1}

    // Free-parameter count: output weights plus, per hidden layer, its matrix
    // entries and one activation flag per coordinate.
    Int representation_size() const;

    int relu_count() const;
    bool ternary() const; // all entries in {-1, 0, 1}

    void validate() const; // throws DimensionError
};

enum class SignClass : uint8_t { Identity, Pos, Zero, Neg };

// Sign classes of every hidden coordinate's pre-activation at some input.
struct ActivationPattern {
    std::vector<std::vector<SignClass>> layers;

    int zero_count() const;
};

struct NetEval {
    std::vector<Rat> output;
    ActivationPattern pattern;
};

// Exact forward pass.
NetEval net_eval(const ReluNetwork& net, const std::vector<Rat>& x);

// The element M_1^T D_1 ... M_{L-1}^T D_{L-1} M_L^T of the autodiff
// conservative gradient at x. `zero_choices` supplies the [0,1] diagonal
// entries for the zero-activation ReLU coordinates, in layer-major order.
// Requires a single-output network.
std::vector<Rat> autodiff_element(const ReluNetwork& net, const std::vector<Rat>& x,
                                  const std::vector<Rat>& zero_choices);

// Same, reusing a precomputed pattern.
std::vector<Rat> autodiff_element(const ReluNetwork& net, const ActivationPattern& pattern,
                                  const std::vector<Rat>& zero_choices);

struct NetFromProgram {
    ReluNetwork net;
    std::vector<int> kept_inputs; // original input slots that survive pruning
};

// Encodes a {+,-,relu} single-output program as a network: one m x m layer per
// operation plus an output selector. Unused inputs are pruned first so that
// m <= 3 cost(P) and the representation size stays within 18 cost(P)^3.
NetFromProgram net_from_program(const Program& program);

// Naive decoding of a ternary-weight network into a {+,-,relu} program.
// Throws NonTernaryWeightError for other weights.
Program program_from_net(const ReluNetwork& net);

} // namespace nsad
