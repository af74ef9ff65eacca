#include <doctest.h>

#include <algorithm>

#include "nsad/cost.hpp"
#include "nsad/engine.hpp"
#include "nsad/enumerate.hpp"
#include "nsad/gen.hpp"
#include "nsad/hardness.hpp"
#include "nsad/relu_net.hpp"
#include "nsad/serialize.hpp"

using namespace nsad;

namespace {

// Direct clause-by-clause reference for the encoder: min over clauses of
// relu(max of the three literal values).
Rat encoder_reference(const CnfFormula& cnf, const std::vector<Rat>& x) {
    std::vector<std::array<int, 3>> clauses = cnf.clauses;
    while ((clauses.size() & (clauses.size() - 1)) != 0) clauses.push_back({1, -1, 1});
    Rat best;
    bool first = true;
    for (const auto& clause : clauses) {
        Rat m;
        bool mfirst = true;
        for (int lit : clause) {
            Rat v = x[static_cast<size_t>(std::abs(lit)) - 1];
            if (lit < 0) v = -v;
            if (mfirst || v > m) m = v;
            mfirst = false;
        }
        if (m < 0) m = 0;
        if (first || m < best) best = m;
        first = false;
    }
    return best;
}

} // namespace

TEST_CASE("encoder matches the clause-by-clause reference on random rationals") {
    Rng rng(7331);
    for (int round = 0; round < 40; ++round) {
        const int p = rng.uniform(3, 8);
        CnfFormula cnf = gen_cnf(rng, p, rng.uniform(1, 12));
        ReluNetwork f = encode_3sat(cnf);
        for (int t = 0; t < 25; ++t) {
            std::vector<Rat> x(static_cast<size_t>(p));
            for (auto& v : x) v = rng.rat(-16, 16, 4);
            CHECK(net_eval(f, x).output[0] == encoder_reference(cnf, x));
        }
    }
}

TEST_CASE("one wide forward sweep equals per-direction sweeps") {
    Rng rng(913);
    for (int round = 0; round < 20; ++round) {
        const int p = rng.uniform(2, 4);
        Program prog = gen_eval_program(rng, p, 30);
        std::vector<double> x(static_cast<size_t>(p));
        for (auto& v : x) v = rng.real(-2, 2);
        std::vector<std::vector<double>> dirs(3, std::vector<double>(static_cast<size_t>(p)));
        for (auto& d : dirs)
            for (auto& v : d) v = rng.real(-1, 1);
        auto wide = directional_derivatives(prog, x, dirs, {});
        REQUIRE(wide.size() == 3);
        for (size_t k = 0; k < dirs.size(); ++k) {
            auto single = directional_derivatives(prog, x, {dirs[k]}, {});
            CHECK(wide[k] == single[0]);
        }
    }
}

TEST_CASE("directional instance at p = 16") {
    DirectionalInstance inst = build_directional_instance(16, 3);
    CHECK(program_cost(inst.pf, CostScheme::unit()) == Rat(6 * 256 + 32));
    RatMat utu = mat_mul(inst.U.transpose(), inst.U);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            CHECK(utu.at(r, c) == (r == c ? Rat(16) : Rat(0)));
    // The exact identities; the float finite-difference pass is covered at
    // p <= 8 where conditioning is tame.
    RatMat btma = mat_mul(mat_mul(inst.B.transpose(), inst.M), inst.A);
    Rat sum = 0;
    for (int i = 0; i < 16; ++i) {
        CHECK(btma.at(i, i) == inst.lambda[static_cast<size_t>(i)]);
        sum += btma.at(i, i);
    }
    RatMat mabt = mat_mul(inst.M, mat_mul(inst.A, inst.B.transpose()));
    Rat tr = 0;
    for (int i = 0; i < 16; ++i) tr += mabt.at(i, i);
    CHECK(tr == sum);
}

TEST_CASE("flatten is idempotent on random nested programs") {
    Rng rng(7141);
    for (int round = 0; round < 15; ++round) {
        auto sub = std::make_shared<const Program>(gen_eval_program(rng, 2, 10));
        Program nested = build_program(
            2, 1,
            {
                ProgramNode::call(sub, "f", {1, 2}),
                ProgramNode::call(sub, "f", {2, 3}),
                ProgramNode::make(Op::add(), {3, 4}),
            });
        Program once = flatten(nested);
        std::string a = dump_json(program_to_json(once));
        std::string b = dump_json(program_to_json(flatten(once)));
        CHECK(a == b);
    }
}

TEST_CASE("rational strings round trip") {
    Rng rng(515151);
    for (int t = 0; t < 300; ++t) {
        Rat r(rng.uniform(-100000, 100000), rng.uniform(1, 9999));
        CHECK(rat_from_string(rat_to_string(r)) == r);
        CHECK(rat_from_json(rat_to_json(r)) == r);
    }
    CHECK(rat_from_string("-7/3") == Rat(-7, 3));
    CHECK(rat_from_string("0.5") == Rat(1, 2));
    CHECK(rat_from_string("12") == Rat(12));
    CHECK_THROWS_AS(rat_from_string("1/0"), ParseError);
    CHECK_THROWS_AS(rat_from_string("abc"), ParseError);
    CHECK_THROWS_AS(rat_from_string(""), ParseError);
}

TEST_CASE("singleton decision handles general rational weights") {
    Rng rng(7777);
    const Rat pool[5] = {Rat(-1), Rat(-1, 2), Rat(0), Rat(1, 2), Rat(3, 2)};
    int nonsingleton = 0;
    for (int round = 0; round < 120; ++round) {
        const int p = rng.uniform(1, 3);
        ReluNetwork net = gen_ternary_net(rng, p, 3, rng.uniform(2, 4), 8);
        for (auto& m : net.mats)
            for (Rat& v : m.a) v = pool[rng.uniform(0, 4)];
        std::vector<Rat> x(static_cast<size_t>(p), Rat(0));
        EnumVerdict verdict = decide_singleton(net, x, round);
        auto verts = brute_force_vertices(net, x);
        REQUIRE(verdict.singleton == (verts.size() == 1));
        if (!verdict.singleton) {
            ++nonsingleton;
            REQUIRE(std::find(verts.begin(), verts.end(), verdict.e2) != verts.end());
        }
    }
    CHECK(nonsingleton > 20);
}

TEST_CASE("multi-output networks decode to multi-output programs") {
    Rng rng(2468);
    for (int round = 0; round < 15; ++round) {
        const int p = rng.uniform(1, 3);
        ReluNetwork net = gen_ternary_net(rng, p, 3, 3, 6);
        RatMat out(2, net.mats.back().cols);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < out.cols; ++c)
                if (!rng.chance(40)) out.at(r, c) = rng.chance(50) ? 1 : -1;
        net.mats.back() = std::move(out);
        Program prog = program_from_net(net);
        CHECK(prog.outputs == 2);
        for (int t = 0; t < 40; ++t) {
            std::vector<Rat> x(static_cast<size_t>(p));
            for (auto& v : x) v = rng.rat(-12, 12, 4);
            auto want = net_eval(net, x).output;
            auto got = evaluate(prog, x);
            CHECK(got == want);
        }
    }
}

TEST_CASE("nested {add,sub,relu} programs encode through flattening") {
    auto sub = std::make_shared<const Program>(
        build_program(1, 1,
                      {
                          ProgramNode::make(Op::sub(), {1, 1}),
                          ProgramNode::make(Op::sub(), {2, 1}),
                          ProgramNode::make(Op::relu(), {3}),
                      })); // relu(-x)
    Program nested = build_program(1, 1,
                                   {
                                       ProgramNode::make(Op::relu(), {1}),
                                       ProgramNode::call(sub, "negpart", {1}),
                                       ProgramNode::make(Op::add(), {2, 3}),
                                   }); // |x|
    NetFromProgram res = net_from_program(nested);
    Rng rng(97);
    for (int t = 0; t < 50; ++t) {
        Rat x = rng.rat(-20, 20, 4);
        CHECK(net_eval(res.net, {x}).output[0] == rat_abs(x));
    }
}

TEST_CASE("enumeration stress: wider nets and off-origin rationals") {
    Rng rng(881);
    int nonsingleton = 0;
    for (int round = 0; round < 250; ++round) {
        const int p = rng.uniform(1, 5);
        ReluNetwork net = gen_ternary_net(rng, p, 5, rng.uniform(2, 5), 14);
        std::vector<Rat> x(static_cast<size_t>(p), Rat(0));
        if (rng.chance(50))
            for (auto& v : x) v = rng.rat(-3, 3, 3);
        EnumVerdict verdict = decide_singleton(net, x, 881 + round);
        auto verts = brute_force_vertices(net, x);
        REQUIRE(verdict.singleton == (verts.size() == 1));
        if (!verdict.singleton) {
            ++nonsingleton;
            REQUIRE(verdict.e1 != verdict.e2);
            REQUIRE(std::find(verts.begin(), verts.end(), verdict.e2) != verts.end());
        }
    }
    CHECK(nonsingleton > 40);
}
