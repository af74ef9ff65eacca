#pragma once

#include <cstdint>
#include <vector>

#include "nsad/cost.hpp"
#include "nsad/program.hpp"
#include "nsad/relu_net.hpp"

namespace nsad {

// Ternary network compiled to int8 weights for exact integer sweeps. When the
// worst-case magnitude bound fits int64 the fast kernels apply; otherwise
// callers fall back to the rational evaluator.
struct TernaryNet {
    int p = 0;
    std::vector<int> rows, cols;
    std::vector<std::vector<int8_t>> mats; // row-major
    std::vector<std::vector<uint8_t>> masks;
    bool fits_int64 = false;
};

TernaryNet compile_ternary(const ReluNetwork& net);

// Scalar output for sign-vector input: bit j of `index` set means x_{j+1} = +1,
// clear means -1.
int64_t ternary_eval_signs(const TernaryNet& net, uint64_t index);

struct SweepOutcome {
    bool found = false;
    uint64_t index = 0; // lowest index with F > 0
};

// First sign vector with positive output, by index. The parallel kernel
// partitions the index space and reduces to the minimum, so both return the
// same witness.
SweepOutcome first_positive_sign_serial(const ReluNetwork& net);
SweepOutcome first_positive_sign_parallel(const ReluNetwork& net, int jobs = 0);

// Batch audit over many programs: worst backward/forward ratios and bound
// violations, exact. Parallel version merges per-thread maxima, which is
// order-independent, so serial and parallel agree exactly.
struct BatchAuditResult {
    Rat max_ratio_b;
    Rat max_ratio_f;
    long long checked = 0;
    long long ratio5_violations = 0;  // ratio_b > 5
    long long omega_violations = 0;   // ratio above its own omega bound
};

BatchAuditResult batch_audit_serial(const std::vector<Program>& programs,
                                    const CostScheme& scheme);
BatchAuditResult batch_audit_parallel(const std::vector<Program>& programs,
                                      const CostScheme& scheme, int jobs = 0);

} // namespace nsad
