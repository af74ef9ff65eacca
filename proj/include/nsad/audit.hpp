#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsad/cost.hpp"
#include "nsad/engine.hpp"
#include "nsad/program.hpp"

namespace nsad {

struct PerOpRow {
    std::string label;
    int fanin = 0;
    int count = 0; // nodes sharing this (op, fanin) signature
    Rat cost_g;
    Rat cost_gd;
    Rat omega_contrib; // (cost(gd) + 2 max(cost(+),cost(x)) |pr|) / cost(g)
};

// Cost aggregates of a program under a scheme. All values exact rationals.
struct CostReport {
    Rat cost_p;
    Rat cost_backprop; // sum of cost(gd_i) + |pr(i)| (cost(+) + cost(x))
    Rat cost_forprop;  // sum of cost(gd_i) + p |pr(i)| cost(x) + p (|pr(i)|-1) cost(+)
    Rat ratio_b;
    Rat ratio_f;
    bool omega_finite = true; // false when some node has cost(g) = 0
    Rat omega_b;              // max-form constant of the backward bound
    Rat omega_b_pairsum;      // per-node max of the exact backward summand ratio
    Rat omega_f;
    std::vector<PerOpRow> per_op;
};

// Closed-form cost of the backward AD program; nested nodes are charged their
// subprogram's own backward cost (backpropagation chaining).
Rat cost_backprop_closed(const Program& program, const CostScheme& scheme);
Rat cost_forprop_closed(const Program& program, const CostScheme& scheme, int ambient_inputs);

// Requires q = 1. Throws UnpricedOpError / MultiOutputError.
CostReport audit(const Program& program, const CostScheme& scheme);

// --- published op tables -----------------------------------------------------

struct OpTableRow {
    std::string label;
    Rat cost_g;
    int fanin = 0;
    Rat cost_gd;
    Rat gd_ratio;  // cost(gd) / cost(g)
    Rat mul_ratio; // cost(x) |pr| / cost(g)
    Rat omega;     // (cost(gd) + 2 cost(x) |pr|) / cost(g)
    std::optional<Rat> bound;
};

// Unit costs on the ReLU dictionary: omega column (5, 3, 4, 3, 5, 3).
std::vector<OpTableRow> op_table_unit();
// Weighted costs: (+,x), (+c,xc), log, exp, inv, and the fused multiply-ReLU.
std::vector<OpTableRow> op_table_weighted(const Rat& c_nonlin, const Rat& c_relu);
// Extended nonsmooth ops: abs, ELU, 3x3 max-pool, and the n-ary norms.
std::vector<OpTableRow> op_table_extended(const Rat& c_nonlin, const Rat& c_relu, int n);

std::string render_op_table(const std::vector<OpTableRow>& rows);

// --- instrumented execution ----------------------------------------------------

enum class RunMode { Eval, Backprop, Forprop };

// Scheme-weighted count of operations actually executed by the engine. Equals
// the closed-form aggregates exactly.
Rat instrumented_run(const Program& program, std::span<const double> input, RunMode mode,
                     const CostScheme& scheme, const SelectionPolicy& policy = {});

} // namespace nsad
