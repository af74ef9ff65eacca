#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "nsad/cost.hpp"
#include "nsad/program.hpp"
#include "nsad/rational.hpp"

namespace nsad {

// Fixed per-engine choice of conservative-gradient element at kinks.
struct SelectionPolicy {
    Rat relu_at_zero = 0; // element of [0,1]
    Rat abs_at_zero = 0;  // element of [-1,1]
    // max / min / median / norm-inf ties always go to the lowest index.

    void validate() const;
};

// User-registered ops, double mode only. `deriv` may be empty, in which case
// differentiation throws NoSelectionError.
struct CustomOp {
    std::function<double(std::span<const double>)> value;
    std::function<std::vector<double>(std::span<const double>)> deriv;
};
using OpRegistry = std::map<std::string, CustomOp>;

// Counts executed dictionary operations, weighted by a scheme. Backward
// accumulation charges cost(+)+cost(x) per predecessor even when the adjoint
// is zero, mirroring the additive cost semantics rather than an optimized run.
struct OpCounter {
    const CostScheme* scheme = nullptr;
    Rat weighted = 0;

    void charge_op(const Op& op) { weighted += scheme->cost(op); }
    void charge_gd(const Op& op) { weighted += scheme->cost_gd(op); }
    void charge_adds(long long n);
    void charge_muls(long long n);
};

// Values x_1..x_m and the selected derivative elements w_i of Algorithm 1'.
template <class T>
struct Trace {
    std::vector<T> values;              // slot i at values[i-1]
    std::vector<std::vector<T>> derivs; // derivs[idx] for computation node idx
};

template <class T>
struct GradResult {
    T value{};
    std::vector<T> grad;
};

// --- evaluation ------------------------------------------------------------

std::vector<double> evaluate(const Program& program, std::span<const double> input,
                             const OpRegistry* registry = nullptr,
                             OpCounter* counter = nullptr);
std::vector<Rat> evaluate(const Program& program, const std::vector<Rat>& input,
                          OpCounter* counter = nullptr);

// --- joint evaluation with selection derivatives ---------------------------

Trace<double> evaluate_with_derivatives(const Program& program,
                                        std::span<const double> input,
                                        const SelectionPolicy& policy,
                                        const OpRegistry* registry = nullptr,
                                        OpCounter* counter = nullptr);
Trace<Rat> evaluate_with_derivatives(const Program& program, const std::vector<Rat>& input,
                                     const SelectionPolicy& policy,
                                     OpCounter* counter = nullptr);

// --- propagation (q = 1 only) ----------------------------------------------

GradResult<double> backprop_from_trace(const Program& program, const Trace<double>& trace,
                                       OpCounter* counter = nullptr);
GradResult<Rat> backprop_from_trace(const Program& program, const Trace<Rat>& trace,
                                    OpCounter* counter = nullptr);

GradResult<double> backprop(const Program& program, std::span<const double> input,
                            const SelectionPolicy& policy,
                            const OpRegistry* registry = nullptr,
                            OpCounter* counter = nullptr);
GradResult<Rat> backprop(const Program& program, const std::vector<Rat>& input,
                         const SelectionPolicy& policy, OpCounter* counter = nullptr);

// Seed rows are per-input tangents; k columns make one k-wide sweep. An empty
// seed means the identity, which reproduces the gradient.
GradResult<double> forprop_from_trace(const Program& program, const Trace<double>& trace,
                                      const std::vector<std::vector<double>>& seed = {},
                                      OpCounter* counter = nullptr);
GradResult<Rat> forprop_from_trace(const Program& program, const Trace<Rat>& trace,
                                   const std::vector<std::vector<Rat>>& seed = {},
                                   OpCounter* counter = nullptr);

GradResult<double> forprop(const Program& program, std::span<const double> input,
                           const SelectionPolicy& policy,
                           const std::vector<std::vector<double>>& seed = {},
                           const OpRegistry* registry = nullptr,
                           OpCounter* counter = nullptr);
GradResult<Rat> forprop(const Program& program, const std::vector<Rat>& input,
                        const SelectionPolicy& policy,
                        const std::vector<std::vector<Rat>>& seed = {},
                        OpCounter* counter = nullptr);

// Entry j is the forward-mode derivative along directions[j]. This equals the
// one-sided directional derivative only where the policy's selections agree
// with the one-sided limits; at kinks the two can differ.
std::vector<double> directional_derivatives(const Program& program,
                                            std::span<const double> input,
                                            const std::vector<std::vector<double>>& directions,
                                            const SelectionPolicy& policy,
                                            const OpRegistry* registry = nullptr);
std::vector<Rat> directional_derivatives(const Program& program, const std::vector<Rat>& input,
                                         const std::vector<std::vector<Rat>>& directions,
                                         const SelectionPolicy& policy);

} // namespace nsad
