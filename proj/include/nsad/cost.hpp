#pragma once

#include <map>
#include <optional>
#include <string>

#include "nsad/program.hpp"
#include "nsad/rational.hpp"

namespace nsad {

// Per-primitive prices for a dictionary and its derived dictionary. The
// derived price cost(gd) is the cost of evaluating the op jointly with its
// selection derivative; the paper treats it as an exogenous parameter, so
// every entry can be overridden.
class CostScheme {
  public:
    // Every op of the ReLU dictionary and its derived dictionary costs 1;
    // extended nonsmooth ops are priced by the weighted formulas at
    // c_nonlin = c_relu = 1.
    static CostScheme unit();

    // c_nonlin >= 1 prices smooth nonlinear ops, c_relu >= 0 prices sign
    // branching. ReLU-family ops cost 1 + c_relu here.
    static CostScheme weighted(Rat c_nonlin, Rat c_relu);

    Rat cost(const Op& op) const;     // cost(g)
    Rat cost_gd(const Op& op) const;  // cost of the joint (g, d) program

    void set_cost(const Op& op, Rat value);
    void set_cost_gd(const Op& op, Rat value);

    bool is_unit() const { return unit_; }
    const Rat& c_nonlin() const { return c_nonlin_; }
    const Rat& c_relu() const { return c_relu_; }

    std::string describe() const;

  private:
    CostScheme(bool unit, Rat c_nl, Rat c_r)
        : unit_(unit), c_nonlin_(std::move(c_nl)), c_relu_(std::move(c_r)) {}

    std::optional<Rat> base_cost(const Op& op) const;
    std::optional<Rat> base_cost_gd(const Op& op) const;
    static std::string op_key(const Op& op);

    bool unit_;
    Rat c_nonlin_;
    Rat c_relu_;
    std::map<std::string, Rat> override_cost_;
    std::map<std::string, Rat> override_gd_;
};

// cost(P) = sum of node costs; a nested node costs its whole subprogram.
// Throws UnpricedOpError when the scheme has no entry for some op.
Rat program_cost(const Program& program, const CostScheme& scheme);

} // namespace nsad
