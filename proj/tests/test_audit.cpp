#include <doctest.h>

#include "nsad/audit.hpp"
#include "nsad/errors.hpp"
#include "nsad/gen.hpp"
#include "nsad/program.hpp"

using namespace nsad;

TEST_CASE("single-op omega contributions under unit costs") {
    const CostScheme unit = CostScheme::unit();
    CHECK(audit(single_op_program(Op::mul()), unit).omega_b == 5);
    CHECK(audit(single_op_program(Op::log()), unit).omega_b == 4); // (2+2)/1
    CHECK(audit(single_op_program(Op::inv()), unit).omega_b == 5); // (3+2)/1
    CHECK(audit(single_op_program(Op::relu()), unit).omega_b == 3);
    CHECK(unit.cost_gd(Op::log()) == 2);
    CHECK(unit.cost_gd(Op::inv()) == 3);
}

TEST_CASE("published unit table row") {
    auto rows = op_table_unit();
    REQUIRE(rows.size() == 6);
    const std::vector<int> want{5, 3, 4, 3, 5, 3};
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].omega == want[i]);
        CHECK(rows[i].omega == *rows[i].bound);
    }
}

TEST_CASE("weighted table at c_nonlin = c_relu = 1 recovers the unit row") {
    auto rows = op_table_weighted(1, 1);
    const std::vector<int> want{5, 3, 4, 3, 5, 3};
    REQUIRE(rows.size() == 6);
    for (size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].omega == want[i]);
}

TEST_CASE("weighted table stays within its published bounds") {
    for (Rat c_nl : {Rat(1), Rat(3, 2), Rat(2), Rat(5), Rat(100)}) {
        for (Rat c_r : {Rat(0), Rat(1, 2), Rat(1), Rat(10)}) {
            for (const auto& row : op_table_weighted(c_nl, c_r)) {
                REQUIRE(row.bound.has_value());
                CHECK(row.omega <= *row.bound);
            }
        }
    }
    // Spot values: inv has cost(gd)/cost(g) = (c_nonlin + 2)/c_nonlin.
    auto rows = op_table_weighted(Rat(2), Rat(1));
    CHECK(rows[4].label == "inv");
    CHECK(rows[4].gd_ratio == Rat(4, 2));
    CHECK(rows[4].omega == Rat(3)); // (2 + 2 + 2)/2
    CHECK(rows[5].label == "xrelu");
    CHECK(rows[5].omega == Rat(3)); // (1+1 + 4)/(1+1)
}

TEST_CASE("extended table stays within its published bounds for c_relu >= 1/n") {
    for (Rat c_nl : {Rat(1), Rat(2), Rat(10)}) {
        for (Rat c_r : {Rat(1, 2), Rat(1), Rat(4)}) {
            for (int n : {2, 3, 9, 64}) {
                for (const auto& row : op_table_extended(c_nl, c_r, n)) {
                    REQUIRE(row.bound.has_value());
                    CHECK(row.omega <= *row.bound);
                }
            }
        }
    }
    // Frozen spot values at c_nonlin = 1, c_relu = 1, n = 4.
    auto rows = op_table_extended(1, 1, 4);
    CHECK(rows[1].label == "abs");
    CHECK(rows[1].omega == Rat(2)); // (2+2)/2
    CHECK(rows[2].label == "elu");
    CHECK(rows[2].omega == Rat(3, 2)); // (4+2)/4
    CHECK(rows[3].label == "max-pool-3x3");
    CHECK(rows[3].cost_g == 161);
    CHECK(rows[3].omega == Rat(179, 161));
    CHECK(rows[4].label == "norm-inf");
    CHECK(rows[4].cost_g == 11); // n + 2n c_r - 1
    CHECK(rows[5].label == "norm1");
    CHECK(rows[5].cost_g == 11); // n(2 + c_r) - 1
}

TEST_CASE("audit of a long multiplication chain is exactly tight") {
    std::vector<ProgramNode> nodes;
    nodes.push_back(ProgramNode::make(Op::mul(), {1, 1}));
    for (int t = 1; t < 100; ++t) nodes.push_back(ProgramNode::make(Op::mul(), {1, t + 1}));
    Program chain = build_program(1, 1, std::move(nodes));
    CostReport rep = audit(chain, CostScheme::unit());
    CHECK(rep.cost_p == 100);
    CHECK(rep.cost_backprop == 500); // per node: gd 1 + 2 (1 + 1)
    CHECK(rep.ratio_b == 5);
    CHECK(rep.ratio_b <= rep.omega_b);
    CHECK(rep.omega_b_pairsum == 5);
}

TEST_CASE("random ReLU-dictionary programs satisfy the bounds") {
    Rng rng(31337);
    for (int round = 0; round < 300; ++round) {
        Program prog = gen_cost_program(rng, 5, 120);
        CostReport rep = audit(prog, CostScheme::unit());
        CHECK(rep.ratio_b <= 5);
        CHECK(rep.ratio_b <= rep.omega_b);
        CHECK(rep.ratio_f <= rep.omega_f);
        CHECK(rep.ratio_b <= rep.omega_b_pairsum);
        CHECK(rep.omega_b_pairsum <= rep.omega_b); // pair sum <= 2 max

        CostScheme weighted = CostScheme::weighted(Rat(rng.uniform(1, 5)), rng.rat(0, 8, 4));
        CostReport wrep = audit(prog, weighted);
        CHECK(wrep.ratio_b <= wrep.omega_b);
        CHECK(wrep.ratio_f <= wrep.omega_f);
        CHECK(wrep.ratio_b <= 5); // robust beyond the unit weighting
    }
}

TEST_CASE("omega_f is affine in the input count") {
    std::vector<ProgramNode> nodes{ProgramNode::make(Op::mul(), {1, 2}),
                                   ProgramNode::make(Op::add(), {3, 2})};
    Program narrow = build_program(2, 1, nodes);
    Program wide = build_program(4, 1, nodes); // same topology, extra unused inputs
    CostReport a = audit(narrow, CostScheme::unit());
    CostReport b = audit(wide, CostScheme::unit());
    // omega_f = (gd + p |pr| + p(|pr|-1))/g: the p-dependent part doubles.
    const Rat gd(1);
    CHECK(a.omega_f - gd == Rat(2 * 3));
    CHECK(b.omega_f - gd == Rat(4 * 3));
    CHECK(b.omega_f - gd == 2 * (a.omega_f - gd));
}

TEST_CASE("instrumented runs equal the closed forms exactly") {
    Rng rng(7117);
    Program p1 = build_program(3, 1,
                               {
                                   ProgramNode::make(Op::add(), {2, 3}),
                                   ProgramNode::make(Op::mul(), {1, 4}),
                               });
    const CostScheme unit = CostScheme::unit();
    std::vector<double> x{2, 1, 3};
    CHECK(instrumented_run(p1, x, RunMode::Eval, unit) == program_cost(p1, unit));
    CHECK(instrumented_run(p1, x, RunMode::Backprop, unit) ==
          cost_backprop_closed(p1, unit));
    CHECK(instrumented_run(p1, x, RunMode::Forprop, unit) ==
          cost_forprop_closed(p1, unit, p1.inputs));

    for (int round = 0; round < 50; ++round) {
        const int p = rng.uniform(1, 5);
        Program prog = gen_eval_program(rng, p, rng.uniform(5, 60));
        std::vector<double> pt(static_cast<size_t>(p));
        for (auto& v : pt) v = rng.real(-2, 2);
        CostScheme scheme = rng.chance(50)
                                ? CostScheme::unit()
                                : CostScheme::weighted(Rat(rng.uniform(1, 4)),
                                                       rng.rat(0, 6, 3));
        CHECK(instrumented_run(prog, pt, RunMode::Eval, scheme) ==
              program_cost(prog, scheme));
        CHECK(instrumented_run(prog, pt, RunMode::Backprop, scheme) ==
              cost_backprop_closed(prog, scheme));
        CHECK(instrumented_run(prog, pt, RunMode::Forprop, scheme) ==
              cost_forprop_closed(prog, scheme, prog.inputs));
    }
}

TEST_CASE("instrumented runs cover nested programs") {
    auto sub = std::make_shared<const Program>(
        build_program(2, 1,
                      {
                          ProgramNode::make(Op::mul(), {1, 2}),
                          ProgramNode::make(Op::relu(), {3}),
                      }));
    Program nested = build_program(2, 1,
                                   {
                                       ProgramNode::call(sub, "s", {1, 2}),
                                       ProgramNode::make(Op::add(), {3, 1}),
                                   });
    const CostScheme unit = CostScheme::unit();
    std::vector<double> x{1.0, 2.0};
    CHECK(instrumented_run(nested, x, RunMode::Eval, unit) == program_cost(nested, unit));
    CHECK(instrumented_run(nested, x, RunMode::Backprop, unit) ==
          cost_backprop_closed(nested, unit));
    CHECK(instrumented_run(nested, x, RunMode::Forprop, unit) ==
          cost_forprop_closed(nested, unit, nested.inputs));
}

TEST_CASE("instrumented forward run scales with the input count") {
    std::vector<ProgramNode> nodes{ProgramNode::make(Op::relu(), {1}),
                                   ProgramNode::make(Op::add(), {5, 2}),
                                   ProgramNode::make(Op::mul(), {6, 3})};
    Program prog = build_program(4, 1, nodes);
    const CostScheme unit = CostScheme::unit();
    std::vector<double> x{1.0, -2.0, 0.5, 3.0};
    // Eq.-style forward accounting at p = 4: per node gd + 4 |pr| + 4 (|pr|-1).
    const Rat want = (1 + 4 * 1 + 0) + (1 + 4 * 2 + 4) + (1 + 4 * 2 + 4);
    CHECK(cost_forprop_closed(prog, unit, 4) == want);
    CHECK(instrumented_run(prog, x, RunMode::Forprop, unit) == want);
}

TEST_CASE("audit error paths") {
    Program two = build_program(1, 2,
                                {
                                    ProgramNode::make(Op::relu(), {1}),
                                    ProgramNode::make(Op::relu(), {1}),
                                });
    CHECK_THROWS_AS(audit(two, CostScheme::unit()), MultiOutputError);

    Program custom = build_program(1, 1, {ProgramNode::make(Op::custom("f", 1), {1})});
    CHECK_THROWS_AS(audit(custom, CostScheme::unit()), UnpricedOpError);

    // Zero-cost node (max-k at c_relu = 0): ratios exist, omega is reported
    // unbounded.
    Program mixed = build_program(2, 1,
                                  {
                                      ProgramNode::make(Op::max_k(2), {1, 2}),
                                      ProgramNode::make(Op::add(), {3, 1}),
                                  });
    CostReport rep = audit(mixed, CostScheme::weighted(1, 0));
    CHECK_FALSE(rep.omega_finite);
    CHECK(rep.cost_p == 1);
}

TEST_CASE("scheme overrides take precedence") {
    CostScheme scheme = CostScheme::unit();
    scheme.set_cost(Op::custom("f", 2), Rat(7));
    scheme.set_cost_gd(Op::custom("f", 2), Rat(9));
    Program prog = build_program(2, 1, {ProgramNode::make(Op::custom("f", 2), {1, 2})});
    CostReport rep = audit(prog, scheme);
    CHECK(rep.cost_p == 7);
    CHECK(rep.cost_backprop == 9 + 2 * 2);
    CHECK_THROWS_AS(scheme.set_cost(Op::mul(), Rat(-1)), UnpricedOpError);
}
