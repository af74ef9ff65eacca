// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nsad/audit.hpp"
#include "nsad/engine.hpp"
#include "nsad/enumerate.hpp"
#include "nsad/gen.hpp"
#include "nsad/hardness.hpp"
#include "nsad/relu_net.hpp"
#include "nsad/serialize.hpp"
#include "nsad/sweep.hpp"
#include "test_support.hpp"

using namespace nsad;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

// 1. Backward overhead ratio <= 5 on random ReLU-dictionary programs,
//    exact-rational audit, zero violations.
Outcome criterion_cheap_gradient() {
    Rng rng(101);
    std::vector<Program> programs;
    programs.reserve(10000);
    for (int i = 0; i < 10000; ++i) programs.push_back(gen_cost_program(rng, 5, 500));
    BatchAuditResult res = batch_audit_parallel(programs, CostScheme::unit());
    std::ostringstream os;
    os << "10000 programs, max ratio_b = " << rat_to_string(res.max_ratio_b)
       << ", violations = " << res.ratio5_violations;
    return {res.checked == 10000 && res.ratio5_violations == 0 &&
                res.omega_violations == 0 && res.max_ratio_b <= 5,
            os.str()};
}

// 2. Published op tables: the unit row exactly, the weighted/extended formulas
//    symbolically in (c_nonlin, c_relu), and every <=-bound column.
Outcome criterion_tables() {
    bool ok = true;
    auto unit = op_table_unit();
    const std::vector<int> want{5, 3, 4, 3, 5, 3};
    ok = ok && unit.size() == 6;
    for (size_t i = 0; i < unit.size() && ok; ++i) ok = unit[i].omega == want[i];

    // Closed forms restated independently of the table builder.
    auto check_weighted = [&](const Rat& c, const Rat& r) {
        auto rows = op_table_weighted(c, r);
        bool good = rows.size() == 6;
        good = good && rows[0].omega == 5;                            // (+,x)
        good = good && rows[1].omega == 3;                            // (+c,xc)
        good = good && rows[2].omega == (2 * c + 2) / c;              // log
        good = good && rows[3].omega == (c + 2) / c;                  // exp
        good = good && rows[4].omega == (c + 4) / c;                  // inv
        good = good && rows[5].omega == (5 + r) / (1 + r);            // x relu
        good = good && rows[2].gd_ratio == 2 && rows[4].gd_ratio == (c + 2) / c;
        for (const auto& row : rows) good = good && row.omega <= *row.bound;
        return good;
    };
    auto check_extended = [&](const Rat& c, const Rat& r, int n) {
        auto rows = op_table_extended(c, r, n);
        const Rat nr(n);
        bool good = rows.size() == 6;
        good = good && rows[1].omega == (3 + r) / (1 + r);                      // abs
        good = good && rows[2].omega == (4 + r + c) / (2 + r + c);              // elu
        good = good && rows[3].omega == (171 + 8 * r) / (153 + 8 * r);          // pool
        good = good && rows[4].omega == (3 * nr + 2 * nr * r - 1) / (nr + 2 * nr * r - 1);
        good = good && rows[5].omega ==
                           (nr * (2 + r) + 2 * nr - 1) / (nr * (2 + r) - 1);    // norm1
        for (const auto& row : rows) good = good && row.omega <= *row.bound;
        return good;
    };
    for (Rat c : {Rat(1), Rat(3, 2), Rat(2), Rat(5), Rat(100)})
        for (Rat r : {Rat(0), Rat(1, 2), Rat(1), Rat(10)}) ok = ok && check_weighted(c, r);
    for (Rat c : {Rat(1), Rat(2), Rat(10)})
        for (Rat r : {Rat(1, 2), Rat(1), Rat(4)})
            for (int n : {2, 3, 9, 64}) ok = ok && check_extended(c, r, n);

    // Unit row recovered at c_nonlin = c_relu = 1.
    auto recovered = op_table_weighted(1, 1);
    for (size_t i = 0; i < recovered.size() && ok; ++i)
        ok = recovered[i].omega == want[i];
    return {ok, "unit row (5,3,4,3,5,3); weighted/extended formulas and bounds"};
}

// 3. Instrumented executions equal the closed-form aggregates exactly.
Outcome criterion_instrumented() {
    Rng rng(303);
    long long mismatches = 0;
    for (int round = 0; round < 1000; ++round) {
        const int p = rng.uniform(1, 5);
        Program prog = gen_eval_program(rng, p, rng.uniform(5, 80));
        std::vector<double> x(static_cast<size_t>(p));
        for (auto& v : x) v = rng.real(-2, 2);
        CostScheme scheme =
            rng.chance(50) ? CostScheme::unit()
                           : CostScheme::weighted(Rat(rng.uniform(1, 4)), rng.rat(0, 6, 3));
        if (instrumented_run(prog, x, RunMode::Eval, scheme) != program_cost(prog, scheme))
            ++mismatches;
        if (instrumented_run(prog, x, RunMode::Backprop, scheme) !=
            cost_backprop_closed(prog, scheme))
            ++mismatches;
        if (instrumented_run(prog, x, RunMode::Forprop, scheme) !=
            cost_forprop_closed(prog, scheme, prog.inputs))
            ++mismatches;
    }
    std::ostringstream os;
    os << "1000 programs x {eval, backprop, forprop}, mismatches = " << mismatches;
    return {mismatches == 0, os.str()};
}

// 4. Backprop vs central finite differences away from kinks; forward and
//    backward gradients identical (1e-12 in doubles, bytewise in rationals).
Outcome criterion_gradients() {
    Rng rng(404);
    long long points = 0, fd_failures = 0, mode_failures = 0;
    for (int round = 0; round < 1000; ++round) {
        const int p = rng.uniform(2, 5);
        Program prog = gen_eval_program(rng, p, rng.uniform(20, 60));
        int sampled = 0;
        for (int attempt = 0; attempt < 40 && sampled < 3; ++attempt) {
            std::vector<double> x(static_cast<size_t>(p));
            for (auto& v : x) v = rng.real(-1.5, 1.5);
            if (test::kink_margin(prog, x) < 1e-3) continue;
            ++sampled;
            ++points;
            auto tr = evaluate_with_derivatives(prog, x, {});
            auto bwd = backprop_from_trace(prog, tr);
            auto fwd = forprop_from_trace(prog, tr);
            auto fd = test::central_fd_gradient(prog, x);
            for (int j = 0; j < p; ++j) {
                if (test::rel_err(bwd.grad[static_cast<size_t>(j)],
                                  fd[static_cast<size_t>(j)]) > 1e-6) {
                    ++fd_failures;
                    break;
                }
            }
            for (int j = 0; j < p; ++j)
                if (std::abs(fwd.grad[static_cast<size_t>(j)] -
                             bwd.grad[static_cast<size_t>(j)]) > 1e-12)
                    ++mode_failures;
        }
        // Exact mode: the serialized gradients agree byte for byte.
        std::vector<Rat> xq(static_cast<size_t>(p));
        for (auto& v : xq) v = rng.rat(-6, 6, 4);
        auto trq = evaluate_with_derivatives(prog, xq, {});
        auto bq = backprop_from_trace(prog, trq);
        auto fq = forprop_from_trace(prog, trq);
        std::string bs, fs;
        for (const Rat& g : bq.grad) bs += rat_to_string(g) + ",";
        for (const Rat& g : fq.grad) fs += rat_to_string(g) + ",";
        if (bs != fs) ++mode_failures;
    }
    const double pass_rate =
        points == 0 ? 0.0 : 1.0 - static_cast<double>(fd_failures) / points;
    std::ostringstream os;
    os << points << " margin points, FD pass rate = " << pass_rate
       << ", mode mismatches = " << mode_failures;
    return {points >= 2000 && pass_rate >= 0.999 && mode_failures == 0, os.str()};
}

// 5. Discretized chain-rule integral along random piecewise-linear paths.
Outcome criterion_paths() {
    Rng rng(505);
    int failures = 0;
    for (int path = 0; path < 100; ++path) {
        const int p = rng.uniform(2, 4);
        Program prog = gen_pwl_program(rng, p, rng.uniform(20, 60));
        std::vector<std::vector<double>> waypoints;
        std::vector<double> start(static_cast<size_t>(p));
        for (auto& v : start) v = rng.real(-1.0, 1.0);
        waypoints.push_back(std::move(start));
        for (int w = 0; w < 4; ++w) {
            std::vector<double> next = waypoints.back();
            for (auto& v : next) v += rng.real(-0.35, 0.35);
            waypoints.push_back(std::move(next));
        }
        const int legs = 4, per_leg = 10000 / legs;
        double integral = 0.0;
        std::vector<double> cur = waypoints[0];
        for (int leg = 0; leg < legs; ++leg) {
            for (int s = 0; s < per_leg; ++s) {
                const double t = static_cast<double>(s + 1) / per_leg;
                std::vector<double> next(static_cast<size_t>(p));
                for (int j = 0; j < p; ++j) {
                    const double a = waypoints[static_cast<size_t>(leg)][static_cast<size_t>(j)];
                    const double b =
                        waypoints[static_cast<size_t>(leg) + 1][static_cast<size_t>(j)];
                    next[static_cast<size_t>(j)] = a + t * (b - a);
                }
                auto g = backprop(prog, cur, {});
                for (int j = 0; j < p; ++j)
                    integral += g.grad[static_cast<size_t>(j)] *
                                (next[static_cast<size_t>(j)] - cur[static_cast<size_t>(j)]);
                cur = std::move(next);
            }
        }
        const double f0 = evaluate(prog, waypoints[0])[0];
        const double f1 = evaluate(prog, cur)[0];
        if (std::abs(f1 - f0 - integral) > 1e-3 * (1.0 + std::abs(f1))) ++failures;
    }
    std::ostringstream os;
    os << "100 paths x 10000 points, failures = " << failures;
    return {failures == 0, os.str()};
}

// 6. Truth-table SAT <=> positive sign vector <=> Clarke nonsingleton at 0.
Outcome criterion_sat() {
    Rng rng(606);
    struct Case {
        CnfFormula cnf;
    };
    std::vector<Case> cases;
    for (int i = 0; i < 500; ++i) {
        Case c;
        // Half sparse, half dense; the dense block makes unsatisfiable
        // formulas actually show up within the p <= 10, n <= 12 budget.
        if (i % 2 == 0)
            c.cnf = gen_cnf(rng, rng.uniform(3, 10), rng.uniform(1, 12));
        else
            c.cnf = gen_cnf(rng, 3, rng.uniform(10, 12));
        cases.push_back(std::move(c));
    }
    long long disagreements = 0;
    long long sat_count = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : disagreements, sat_count)
    for (long long i = 0; i < static_cast<long long>(cases.size()); ++i) {
        const CnfFormula& cnf = cases[static_cast<size_t>(i)].cnf;
        const bool sat = test::truth_table_sat(cnf).has_value();
        ReluNetwork f = encode_3sat(cnf);
        SignSweepResult sweep = sign_vector_sweep(f, 1);
        const bool clarke_singleton = clarke_singleton_at_zero(f, 1);
        if (sweep.positive_found != sat || clarke_singleton != !sat) ++disagreements;
        if (sat) {
            ++sat_count;
            std::vector<bool> assignment;
            for (int s : sweep.witness) assignment.push_back(s == 1);
            if (!cnf.eval(assignment)) ++disagreements;
        }
    }
    std::ostringstream os;
    os << "500 formulas (" << sat_count << " satisfiable, " << 500 - sat_count
       << " not), disagreements = " << disagreements;
    return {disagreements == 0 && sat_count < 500, os.str()};
}

// 7. Conservative enumeration vs the brute-force vertex oracle.
Outcome criterion_enumeration() {
    std::vector<uint64_t> seeds(1000);
    for (size_t i = 0; i < seeds.size(); ++i) seeds[i] = 700 + i;
    long long disagreements = 0, two_element_count = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : disagreements, two_element_count)
    for (long long i = 0; i < static_cast<long long>(seeds.size()); ++i) {
        Rng rng(seeds[static_cast<size_t>(i)]);
        const int p = rng.uniform(1, 4);
        ReluNetwork net = gen_ternary_net(rng, p, 4, rng.uniform(2, 4), 12);
        std::vector<Rat> x(static_cast<size_t>(p), Rat(0));
        EnumVerdict verdict = decide_singleton(net, x, seeds[static_cast<size_t>(i)]);
        auto verts = brute_force_vertices(net, x);
        bool good = verdict.singleton == (verts.size() == 1);
        if (!verdict.singleton) {
            ++two_element_count;
            good = good && verdict.e1 != verdict.e2;
            good = good && autodiff_element(net, x, verdict.choices2) == verdict.e2;
            std::vector<Rat> zeros(
                static_cast<size_t>(split_activations(net, x).variable_count()), Rat(0));
            good = good && autodiff_element(net, x, zeros) == verdict.e1;
        }
        if (!good) ++disagreements;
    }
    std::ostringstream os;
    os << "1000 nets (" << two_element_count
       << " with two elements), disagreements = " << disagreements;
    return {disagreements == 0 && two_element_count > 100, os.str()};
}

// 8. Recursive max networks.
Outcome criterion_max_net() {
    Rng rng(808);
    bool ok = true;
    for (int k = 1; k <= 4 && ok; ++k) {
        ReluNetwork mx = max_net(k);
        ok = ok && mx.ternary();
        for (size_t l = 0; l + 1 < mx.mats.size(); ++l)
            ok = ok && mx.mats[l].rows <= 3 * (1 << (k - 1));
        const int n = 1 << k;
        for (int t = 0; t < 1000 && ok; ++t) {
            std::vector<Rat> x(static_cast<size_t>(n));
            Rat direct(-1000000);
            for (auto& v : x) {
                v = rng.rat(-64, 64, 8);
                direct = std::max(direct, v);
            }
            ok = net_eval(mx, x).output[0] == direct;
        }
    }
    return {ok, "k in {1,2,3,4}: exact max, widths <= 3*2^(k-1), ternary weights"};
}

// 9. Directional construction identities and program cost.
Outcome criterion_directional() {
    bool ok = true;
    std::ostringstream os;
    for (int p : {2, 4, 8}) {
        DirectionalInstance inst = build_directional_instance(p, 900 + p);
        DirectionalReport rep = directional_check(inst);
        const Rat cost = program_cost(inst.pf, CostScheme::unit());
        const bool cost_ok = cost == Rat(6 * p * p + 2 * p);
        ok = ok && rep.all_ok() && cost_ok;
        os << "p=" << p << (rep.all_ok() && cost_ok ? " ok" : " FAIL") << " ";
    }
    os << "(derivatives 1e-8, trace exact, gradient 1e-6, cost 6p^2+2p)";
    return {ok, os.str()};
}

// 10. Program <-> network conversions: function equality and the size bound.
Outcome criterion_conversions() {
    Rng rng(1010);
    bool ok = true;
    for (int round = 0; round < 60 && ok; ++round) {
        const int p = rng.uniform(1, 6);
        Program prog = gen_d0_program(rng, p, rng.uniform(p, 28));
        const Int c = numerator(program_cost(prog, CostScheme::unit()));
        NetFromProgram res = net_from_program(prog);
        ok = ok && res.net.representation_size() <= 18 * c * c * c;
        for (int t = 0; t < 100 && ok; ++t) {
            std::vector<Rat> x(static_cast<size_t>(p));
            for (auto& v : x) v = rng.rat(-24, 24, 4);
            std::vector<Rat> pruned;
            for (int kept : res.kept_inputs)
                pruned.push_back(x[static_cast<size_t>(kept - 1)]);
            ok = net_eval(res.net, pruned).output[0] == evaluate(prog, x)[0];
        }
    }
    for (int round = 0; round < 40 && ok; ++round) {
        const int p = rng.uniform(1, 4);
        ReluNetwork net = gen_ternary_net(rng, p, 4, rng.uniform(1, 4), 8);
        Program prog = program_from_net(net);
        NetFromProgram back = net_from_program(prog);
        for (int t = 0; t < 100 && ok; ++t) {
            std::vector<Rat> x(static_cast<size_t>(p));
            for (auto& v : x) v = rng.rat(-24, 24, 4);
            const Rat direct = net_eval(net, x).output[0];
            ok = ok && evaluate(prog, x)[0] == direct;
            std::vector<Rat> pruned;
            for (int kept : back.kept_inputs)
                pruned.push_back(x[static_cast<size_t>(kept - 1)]);
            ok = ok && net_eval(back.net, pruned).output[0] == direct;
        }
    }
    return {ok, "100 random points per instance, size <= 18 cost^3"};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"cheap conservative gradient (ratio_b <= 5, exact)", criterion_cheap_gradient},
        {"op tables reproduce the published constants", criterion_tables},
        {"instrumented cost equals the closed forms", criterion_instrumented},
        {"backprop matches finite differences; modes agree", criterion_gradients},
        {"path conservativity of the chain-rule integral", criterion_paths},
        {"SAT equivalence chain on random 3-CNFs", criterion_sat},
        {"conservative enumeration matches the vertex oracle", criterion_enumeration},
        {"recursive max networks are exact and ternary", criterion_max_net},
        {"directional-derivative construction identities", criterion_directional},
        {"program/network conversions preserve functions", criterion_conversions},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        std::printf("%s  criterion %zu: %s  [%s]  (%lld ms)\n",
                    outcome.ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    outcome.detail.c_str(), static_cast<long long>(elapsed));
        std::fflush(stdout);
        if (!outcome.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
