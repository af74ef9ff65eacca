#include <doctest.h>

#include "nsad/enumerate.hpp"
#include "nsad/gen.hpp"
#include "nsad/hardness.hpp"
#include "nsad/relu_net.hpp"
#include "nsad/serialize.hpp"
#include "test_support.hpp"

using namespace nsad;

// Exhaustive families, as opposed to the sampled ones elsewhere.

TEST_CASE("singleton decision agrees with the oracle on every tiny net") {
    // p = 2, one hidden layer of width 2, every {-1,0,1} weight assignment and
    // every mask, at the origin and at a generic point: 81 * 9 * 4 instances.
    const Rat vals[3] = {Rat(-1), Rat(0), Rat(1)};
    long long nonsingleton = 0;
    for (int w1 = 0; w1 < 81; ++w1) {
        for (int w2 = 0; w2 < 9; ++w2) {
            for (int mask = 0; mask < 4; ++mask) {
                ReluNetwork net;
                RatMat m1(2, 2), m2(1, 2);
                int code = w1;
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c) {
                        m1.at(r, c) = vals[code % 3];
                        code /= 3;
                    }
                code = w2;
                for (int c = 0; c < 2; ++c) {
                    m2.at(0, c) = vals[code % 3];
                    code /= 3;
                }
                net.mats = {std::move(m1), std::move(m2)};
                net.masks = {{static_cast<uint8_t>(mask & 1),
                              static_cast<uint8_t>((mask >> 1) & 1)}};
                for (const std::vector<Rat>& x :
                     {std::vector<Rat>{Rat(0), Rat(0)}, std::vector<Rat>{Rat(1), Rat(-2)}}) {
                    EnumVerdict verdict = decide_singleton(net, x, 1);
                    auto verts = brute_force_vertices(net, x);
                    REQUIRE(verdict.singleton == (verts.size() == 1));
                    if (!verdict.singleton) {
                        ++nonsingleton;
                        REQUIRE(verdict.e1 != verdict.e2);
                        REQUIRE(autodiff_element(net, x, verdict.choices2) == verdict.e2);
                    }
                }
            }
        }
    }
    CHECK(nonsingleton > 100);
}

TEST_CASE("encoder equivalence on every subset of the full 3-variable cover") {
    // The eight canonical clauses over (b1, b2, b3) cover all sign patterns;
    // a subset is unsatisfiable exactly when it is the full cover.
    std::vector<std::array<int, 3>> canonical;
    for (int mask = 0; mask < 8; ++mask)
        canonical.push_back({(mask & 1) ? 1 : -1, (mask & 2) ? 2 : -2,
                             (mask & 4) ? 3 : -3});
    for (int subset = 1; subset < 256; ++subset) {
        CnfFormula cnf;
        cnf.var_count = 3;
        for (int c = 0; c < 8; ++c)
            if (subset & (1 << c)) cnf.clauses.push_back(canonical[static_cast<size_t>(c)]);
        const bool sat = test::truth_table_sat(cnf).has_value();
        REQUIRE(sat == (subset != 255));
        ReluNetwork f = encode_3sat(cnf);
        REQUIRE(sign_vector_sweep(f, 1).positive_found == sat);
        REQUIRE(clarke_singleton_at_zero(f) == !sat);
    }
}

TEST_CASE("generator output is frozen for reproducibility") {
    // mt19937_64 plus modulo draws are platform-stable; these frozen artifacts
    // make any drift loud.
    Rng r1(1);
    CnfFormula cnf = gen_cnf(r1, 3, 2);
    CHECK(to_dimacs(cnf) == "p cnf 3 2\n-3 -1 -2 0\n3 1 2 0\n");

    Rng r2(2);
    Program prog = gen_eval_program(r2, 2, 4);
    CHECK(dump_json(program_to_json(prog)) ==
          "{\"p\":2,\"q\":1,\"nodes\":[{\"op\":\"add\",\"args\":[2,2]},"
          "{\"op\":\"mul\",\"args\":[1,2]},{\"op\":\"add\",\"args\":[3,4]},"
          "{\"op\":\"add\",\"args\":[5,4]}]}\n");
}
