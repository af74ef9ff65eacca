#include "nsad/sweep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>

#include "nsad/audit.hpp"
#include "nsad/errors.hpp"

namespace nsad {

TernaryNet compile_ternary(const ReluNetwork& net) {
    net.validate();
    if (!net.ternary()) throw NonTernaryWeightError("sweep kernels need {-1,0,1} weights");
    if (net.output_dim() != 1)
        throw DimensionError("sweep kernels need a single-output network");
    TernaryNet t;
    t.p = net.input_dim();
    for (const auto& m : net.mats) {
        t.rows.push_back(m.rows);
        t.cols.push_back(m.cols);
        std::vector<int8_t> w(m.a.size());
        for (size_t i = 0; i < m.a.size(); ++i)
            w[i] = m.a[i] == 0 ? 0 : (m.a[i] > 0 ? 1 : -1);
        t.mats.push_back(std::move(w));
    }
    t.masks = net.masks;

    // Worst-case magnitude with +-1 inputs: per layer, max absolute row sum
    // times the incoming bound.
    Int bound = 1;
    bool ok = true;
    for (size_t l = 0; l < t.mats.size(); ++l) {
        Int worst = 0;
        for (int r = 0; r < t.rows[l]; ++r) {
            Int row = 0;
            for (int c = 0; c < t.cols[l]; ++c)
                row += t.mats[l][static_cast<size_t>(r) * t.cols[l] + c] != 0 ? 1 : 0;
            worst = std::max(worst, row);
        }
        bound *= std::max(worst, Int(1));
        if (bound > (Int(1) << 62)) {
            ok = false;
            break;
        }
    }
    t.fits_int64 = ok;
    return t;
}

int64_t ternary_eval_signs(const TernaryNet& net, uint64_t index) {
    std::vector<int64_t> v(static_cast<size_t>(net.p));
    for (int j = 0; j < net.p; ++j) v[static_cast<size_t>(j)] = (index >> j) & 1 ? 1 : -1;
    std::vector<int64_t> nv;
    for (size_t l = 0; l < net.mats.size(); ++l) {
        nv.assign(static_cast<size_t>(net.rows[l]), 0);
        const int8_t* w = net.mats[l].data();
        for (int r = 0; r < net.rows[l]; ++r) {
            int64_t acc = 0;
            const int8_t* row = w + static_cast<size_t>(r) * net.cols[l];
            for (int c = 0; c < net.cols[l]; ++c) {
                if (row[c] == 1)
                    acc += v[static_cast<size_t>(c)];
                else if (row[c] == -1)
                    acc -= v[static_cast<size_t>(c)];
            }
            nv[static_cast<size_t>(r)] = acc;
        }
        if (l + 1 < net.mats.size()) {
            for (size_t c = 0; c < nv.size(); ++c)
                if (net.masks[l][c] && nv[c] < 0) nv[c] = 0;
        }
        v.swap(nv);
    }
    return v[0];
}

namespace {

// Rational fallback for networks whose magnitude bound does not fit int64.
bool positive_at_signs_exact(const ReluNetwork& net, uint64_t index) {
    std::vector<Rat> x(static_cast<size_t>(net.input_dim()));
    for (int j = 0; j < net.input_dim(); ++j)
        x[static_cast<size_t>(j)] = (index >> j) & 1 ? 1 : -1;
    return net_eval(net, x).output[0] > 0;
}

} // namespace

SweepOutcome first_positive_sign_serial(const ReluNetwork& net) {
    TernaryNet t = compile_ternary(net);
    const uint64_t total = 1ULL << t.p;
    for (uint64_t i = 0; i < total; ++i) {
        bool positive = t.fits_int64 ? ternary_eval_signs(t, i) > 0
                                     : positive_at_signs_exact(net, i);
        if (positive) return {true, i};
    }
    return {false, 0};
}

SweepOutcome first_positive_sign_parallel(const ReluNetwork& net, int jobs) {
    TernaryNet t = compile_ternary(net);
    const uint64_t total = 1ULL << t.p;
    uint64_t best = total;
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
#pragma omp parallel for schedule(static) reduction(min : best)
    for (long long i = 0; i < static_cast<long long>(total); ++i) {
        const uint64_t idx = static_cast<uint64_t>(i);
        if (idx < best) {
            bool positive = t.fits_int64 ? ternary_eval_signs(t, idx) > 0
                                         : positive_at_signs_exact(net, idx);
            if (positive) best = std::min(best, idx);
        }
    }
    if (best == total) return {false, 0};
    return {true, best};
}

namespace {

void fold_audit(BatchAuditResult& acc, const CostReport& rep) {
    acc.checked += 1;
    acc.max_ratio_b = std::max(acc.max_ratio_b, rep.ratio_b);
    acc.max_ratio_f = std::max(acc.max_ratio_f, rep.ratio_f);
    if (rep.ratio_b > 5) acc.ratio5_violations += 1;
    if (rep.omega_finite && (rep.ratio_b > rep.omega_b || rep.ratio_f > rep.omega_f))
        acc.omega_violations += 1;
}

void merge(BatchAuditResult& into, const BatchAuditResult& from) {
    into.checked += from.checked;
    into.max_ratio_b = std::max(into.max_ratio_b, from.max_ratio_b);
    into.max_ratio_f = std::max(into.max_ratio_f, from.max_ratio_f);
    into.ratio5_violations += from.ratio5_violations;
    into.omega_violations += from.omega_violations;
}

} // namespace

BatchAuditResult batch_audit_serial(const std::vector<Program>& programs,
                                    const CostScheme& scheme) {
    BatchAuditResult acc;
    acc.max_ratio_b = 0;
    acc.max_ratio_f = 0;
    for (const auto& prog : programs) fold_audit(acc, audit(prog, scheme));
    return acc;
}

BatchAuditResult batch_audit_parallel(const std::vector<Program>& programs,
                                      const CostScheme& scheme, int jobs) {
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
    BatchAuditResult acc;
    acc.max_ratio_b = 0;
    acc.max_ratio_f = 0;
#pragma omp parallel
    {
        BatchAuditResult local;
        local.max_ratio_b = 0;
        local.max_ratio_f = 0;
#pragma omp for schedule(static) nowait
        for (long long i = 0; i < static_cast<long long>(programs.size()); ++i)
            fold_audit(local, audit(programs[static_cast<size_t>(i)], scheme));
#pragma omp critical
        merge(acc, local);
    }
    return acc;
}

} // namespace nsad
