// Timing comparison of the serial reference kernels against the OpenMP ones:
// exhaustive sign-vector sweeps over SAT-gadget networks and exact batch cost
// audits.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <vector>

#include "nsad/gen.hpp"
#include "nsad/hardness.hpp"
#include "nsad/sweep.hpp"

using namespace nsad;

namespace {

double seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Unsatisfiable by construction (full sign cover on the first three
// variables), so both sweeps scan all 2^p vectors.
CnfFormula exhaustive_cnf(int p, int extra_clauses) {
    Rng rng(1234);
    CnfFormula cnf = gen_cnf(rng, p, extra_clauses);
    for (int mask = 0; mask < 8; ++mask)
        cnf.clauses.push_back({(mask & 1) ? 1 : -1, (mask & 2) ? 2 : -2,
                               (mask & 4) ? 3 : -3});
    return cnf;
}

void bench_sign_sweep(int p, int extra_clauses) {
    ReluNetwork net = encode_3sat(exhaustive_cnf(p, extra_clauses));

    auto t0 = std::chrono::steady_clock::now();
    SweepOutcome serial = first_positive_sign_serial(net);
    const double ts = seconds(t0);

    t0 = std::chrono::steady_clock::now();
    SweepOutcome parallel = first_positive_sign_parallel(net);
    const double tp = seconds(t0);

    std::printf("sign sweep   p=%2d  serial %8.3fs  parallel %8.3fs  speedup %5.2fx"
                "  agree=%s\n",
                p, ts, tp, ts / tp,
                serial.found == parallel.found &&
                        (!serial.found || serial.index == parallel.index)
                    ? "yes"
                    : "NO");
}

void bench_batch_audit(int count) {
    Rng rng(4321);
    std::vector<Program> programs;
    programs.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) programs.push_back(gen_cost_program(rng, 50, 400));
    const CostScheme unit = CostScheme::unit();

    auto t0 = std::chrono::steady_clock::now();
    BatchAuditResult serial = batch_audit_serial(programs, unit);
    const double ts = seconds(t0);

    t0 = std::chrono::steady_clock::now();
    BatchAuditResult parallel = batch_audit_parallel(programs, unit);
    const double tp = seconds(t0);

    std::printf("batch audit  %d programs  serial %8.3fs  parallel %8.3fs  speedup %5.2fx"
                "  agree=%s\n",
                count, ts, tp, ts / tp,
                serial.max_ratio_b == parallel.max_ratio_b &&
                        serial.max_ratio_f == parallel.max_ratio_f
                    ? "yes"
                    : "NO");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel kernels run serially\n");
#endif
    bench_sign_sweep(14, 4);
    bench_sign_sweep(16, 4);
    bench_batch_audit(2000);
    return 0;
}
