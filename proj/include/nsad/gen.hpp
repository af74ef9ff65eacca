#pragma once

#include <cstdint>
#include <random>

#include "nsad/hardness.hpp"
#include "nsad/program.hpp"
#include "nsad/relu_net.hpp"

namespace nsad {

// Seeded generator with platform-stable primitives (raw engine draws only;
// standard distributions are not bit-stable across library implementations).
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(uint64_t seed) : engine(seed) {}

    uint64_t bits() { return engine(); }
    int uniform(int lo, int hi) { // inclusive
        return lo + static_cast<int>(bits() % static_cast<uint64_t>(hi - lo + 1));
    }
    bool chance(int percent) { return uniform(1, 100) <= percent; }
    double real(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(bits() >> 11) * 0x1.0p-53);
    }
    Rat rat(int lo_num, int hi_num, int den) { return Rat(uniform(lo_num, hi_num), den); }
};

// Random program over the full ReLU dictionary
// {+, x, +c, xc, inv, exp, log, relu}; meant for cost accounting, not
// evaluation (no domain guards).
Program gen_cost_program(Rng& rng, int min_nodes, int max_nodes);

// Random evaluable single-output program over {+, x, +c, xc, relu} with tamed
// magnitudes (each multiplication keeps one input-slot operand).
Program gen_eval_program(Rng& rng, int p, int n_nodes);

// Piecewise-linear variant over {+, +c, xc, relu}; along a straight path the
// selection-based chain-rule integral is exact between kink crossings.
Program gen_pwl_program(Rng& rng, int p, int n_nodes);

// Random {+, -, relu} program that reads every input.
Program gen_d0_program(Rng& rng, int p, int n_nodes);

// Random single-output network with weights in {-1,0,1} and at most
// `relu_budget` ReLU coordinates. Hidden widths up to max_width, L matrices.
ReluNetwork gen_ternary_net(Rng& rng, int p, int max_width, int layers, int relu_budget);

// Random 3-CNF with distinct variables per clause.
CnfFormula gen_cnf(Rng& rng, int var_count, int clause_count);

} // namespace nsad
