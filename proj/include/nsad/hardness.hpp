#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsad/program.hpp"
#include "nsad/relu_net.hpp"

namespace nsad {

// 3-CNF formula; literals are DIMACS-style signed 1-based variable indices.
struct CnfFormula {
    int var_count = 0;
    std::vector<std::array<int, 3>> clauses;

    bool eval(const std::vector<bool>& assignment) const;
};

CnfFormula parse_dimacs(std::istream& in);
CnfFormula parse_dimacs_string(const std::string& text);
std::string to_dimacs(const CnfFormula& cnf);

// Lemma-style recursive max network: max of 2^k inputs with k ReLU layers of
// width at most 3 * 2^(k-1) and weights in {-1,0,1}.
ReluNetwork max_net(int k);

// Encodes a 3-CNF as a ternary-weight ReLU network F with
//   satisfiable  <=>  exists s in {-1,1}^p with F(s) > 0  <=>  Clarke
//   subdifferential at 0 is not {0}.
// Clauses are padded to a power of two with an always-true clause.
ReluNetwork encode_3sat(const CnfFormula& cnf);

struct SignSweepResult {
    bool positive_found = false;
    std::vector<int> witness; // entries in {-1, +1} when found
};

// Sweeps all sign vectors (p <= 20) for F > 0. jobs = 0 uses the OpenMP
// default; 1 forces the serial reference path.
SignSweepResult sign_vector_sweep(const ReluNetwork& net, int jobs = 0);

// True iff F vanishes on every sign vector, which for encoder outputs is
// equivalent to the Clarke subdifferential at 0 being {0}.
bool clarke_singleton_at_zero(const ReluNetwork& net, int jobs = 0);

// --- directional-derivative lower-bound construction ---------------------------

// U is a Sylvester +-1 orthogonal matrix (U^T U = p I), B and M random
// nonsingular rationals, and the direction columns a_i = lambda_i (B^T M)^{-1} e_i
// enforce sign(U B^T M a_i) = u_i exactly. `pf` implements
//   (x, B, M) |-> (1/p) sum_i |[U B^T M x]_i|
// over {+, x, +c, xc, relu} with cost 6p^2 + 2p; its inputs are x then B
// (row-major) then M.
struct DirectionalInstance {
    int p = 0;
    uint64_t seed = 0;
    RatMat U, B, M, A;
    std::vector<Rat> lambda; // b_i^T M a_i = lambda_i by construction
    Program pf;
};

DirectionalInstance build_directional_instance(int p, uint64_t seed);

struct DirectionalReport {
    bool constraints_ok = false;   // sign(U B^T M a_i) = u_i
    bool derivatives_ok = false;   // one-sided FD along a_i vs b_i^T M a_i, 1e-8
    bool trace_ok = false;         // sum of derivatives = Tr(M A B^T), exact
    bool gradient_ok = false;      // FD grad of Tr(M A B^T) in M vs B A^T, 1e-6
    double max_derivative_err = 0.0;
    double max_gradient_err = 0.0;
    Rat trace_value;

    bool all_ok() const {
        return constraints_ok && derivatives_ok && trace_ok && gradient_ok;
    }
};

DirectionalReport directional_check(const DirectionalInstance& instance);

} // namespace nsad
