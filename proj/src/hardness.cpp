#include "nsad/hardness.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>

#include "nsad/engine.hpp"
#include "nsad/errors.hpp"
#include "nsad/sweep.hpp"

namespace nsad {

bool CnfFormula::eval(const std::vector<bool>& assignment) const {
    for (const auto& clause : clauses) {
        bool sat = false;
        for (int lit : clause) {
            const bool v = assignment[static_cast<size_t>(std::abs(lit)) - 1];
            if (lit > 0 ? v : !v) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

CnfFormula parse_dimacs(std::istream& in) {
    CnfFormula cnf;
    int declared_clauses = -1;
    std::string line;
    std::vector<int> current;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string tag, fmt;
            ls >> tag >> fmt >> cnf.var_count >> declared_clauses;
            if (fmt != "cnf" || cnf.var_count < 1)
                throw ParseError("bad DIMACS problem line: " + line);
            continue;
        }
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (current.size() != 3)
                    throw WidthError("clause width " + std::to_string(current.size()) +
                                     ", need exactly 3 literals");
                cnf.clauses.push_back({current[0], current[1], current[2]});
                current.clear();
            } else {
                if (std::abs(lit) > cnf.var_count)
                    throw ParseError("literal " + std::to_string(lit) +
                                     " out of range");
                current.push_back(lit);
            }
        }
    }
    if (!current.empty()) throw ParseError("unterminated clause");
    if (declared_clauses >= 0 &&
        declared_clauses != static_cast<int>(cnf.clauses.size()))
        throw ParseError("clause count does not match the problem line");
    if (cnf.clauses.empty()) throw ParseError("no clauses");
    return cnf;
}

CnfFormula parse_dimacs_string(const std::string& text) {
    std::istringstream in(text);
    return parse_dimacs(in);
}

std::string to_dimacs(const CnfFormula& cnf) {
    std::ostringstream os;
    os << "p cnf " << cnf.var_count << ' ' << cnf.clauses.size() << '\n';
    for (const auto& clause : cnf.clauses)
        os << clause[0] << ' ' << clause[1] << ' ' << clause[2] << " 0\n";
    return os.str();
}

namespace {

RatMat max2_first() { // A
    return RatMat::from_rows({{Rat(1), Rat(-1)}, {Rat(0), Rat(1)}, {Rat(0), Rat(-1)}});
}

RatMat max2_last() { // B
    return RatMat::from_rows({{Rat(1), Rat(1), Rat(-1)}});
}

} // namespace

ReluNetwork max_net(int k) {
    if (k < 1) throw DimensionError("max_net needs k >= 1");
    ReluNetwork net;
    net.mats = {max2_first(), max2_last()};
    net.masks = {{1, 1, 1}};
    for (int step = 1; step < k; ++step) {
        ReluNetwork bigger;
        for (size_t l = 0; l + 1 < net.mats.size(); ++l) {
            bigger.mats.push_back(block_diag(net.mats[l], net.mats[l]));
            std::vector<uint8_t> mask = net.masks[l];
            mask.insert(mask.end(), net.masks[l].begin(), net.masks[l].end());
            bigger.masks.push_back(std::move(mask));
        }
        bigger.mats.push_back(
            mat_mul(max2_first(), block_diag(net.mats.back(), net.mats.back())));
        bigger.masks.push_back({1, 1, 1});
        bigger.mats.push_back(max2_last());
        net = std::move(bigger);
    }
    net.validate();
    return net;
}

ReluNetwork encode_3sat(const CnfFormula& cnf) {
    if (cnf.var_count < 1) throw ParseError("formula needs at least one variable");
    for (const auto& clause : cnf.clauses)
        for (int lit : clause)
            if (lit == 0 || std::abs(lit) > cnf.var_count)
                throw WidthError("bad literal in clause");

    // Pad the clause list to a power of two with the always-true clause
    // (b1 or not b1 or b1).
    std::vector<std::array<int, 3>> clauses = cnf.clauses;
    int k = 0;
    while ((1 << k) < static_cast<int>(clauses.size())) ++k;
    while (static_cast<int>(clauses.size()) < (1 << k)) clauses.push_back({1, -1, 1});
    const int n_hat = static_cast<int>(clauses.size());
    const int p = cnf.var_count;

    // Clause stage: a skip (identity-mask) layer extracts the literal values
    // (the third literal copied to make four), then each clause runs through
    // the two max-net layers and the outer ReLU. Folding the literal matrix
    // into the max layer would leave {-1,0,1} whenever a clause repeats a
    // variable, so it stays a layer of its own.
    const RatMat a = max2_first();
    const RatMat b = max2_last();
    const RatMat n1 = block_diag(a, a);             // 6 x 4
    const RatMat n2 = mat_mul(a, block_diag(b, b)); // 3 x 6
    RatMat m1(4 * n_hat, p);
    RatMat m2(6 * n_hat, 4 * n_hat);
    RatMat m3(3 * n_hat, 6 * n_hat);
    RatMat m4(n_hat, 3 * n_hat);
    for (int c = 0; c < n_hat; ++c) {
        for (int t = 0; t < 3; ++t) {
            const int l = clauses[static_cast<size_t>(c)][static_cast<size_t>(t)];
            m1.at(4 * c + t, std::abs(l) - 1) = l > 0 ? 1 : -1;
        }
        for (int col = 0; col < p; ++col) m1.at(4 * c + 3, col) = m1.at(4 * c + 2, col);
        for (int r = 0; r < 6; ++r)
            for (int col = 0; col < 4; ++col) m2.at(6 * c + r, 4 * c + col) = n1.at(r, col);
        for (int r = 0; r < 3; ++r)
            for (int col = 0; col < 6; ++col) m3.at(3 * c + r, 6 * c + col) = n2.at(r, col);
        for (int col = 0; col < 3; ++col) m4.at(c, 3 * c + col) = b.at(0, col);
    }

    ReluNetwork net;
    net.mats = {std::move(m1), std::move(m2), std::move(m3), std::move(m4)};
    net.masks = {std::vector<uint8_t>(static_cast<size_t>(4 * n_hat), 0),
                 std::vector<uint8_t>(static_cast<size_t>(6 * n_hat), 1),
                 std::vector<uint8_t>(static_cast<size_t>(3 * n_hat), 1),
                 std::vector<uint8_t>(static_cast<size_t>(n_hat), 1)};

    // Combine clauses with min(z) = -max(-z).
    if (k == 0) {
        RatMat out(1, 1);
        out.at(0, 0) = 1;
        net.mats.push_back(std::move(out));
    } else {
        ReluNetwork mx = max_net(k);
        net.mats.push_back(negate(mx.mats[0]));
        net.masks.push_back(mx.masks[0]);
        for (size_t l = 1; l + 1 < mx.mats.size(); ++l) {
            net.mats.push_back(mx.mats[l]);
            net.masks.push_back(mx.masks[l]);
        }
        net.mats.push_back(negate(mx.mats.back()));
    }
    net.validate();
    return net;
}

SignSweepResult sign_vector_sweep(const ReluNetwork& net, int jobs) {
    const int p = net.input_dim();
    if (p > 20)
        throw BudgetExceeded("sign sweep over 2^" + std::to_string(p) +
                             " vectors exceeds the p <= 20 budget");
    SweepOutcome out = jobs == 1 ? first_positive_sign_serial(net)
                                 : first_positive_sign_parallel(net, jobs);
    SignSweepResult res;
    res.positive_found = out.found;
    if (out.found) {
        res.witness.resize(static_cast<size_t>(p));
        for (int j = 0; j < p; ++j)
            res.witness[static_cast<size_t>(j)] = (out.index >> j) & 1 ? 1 : -1;
    }
    return res;
}

bool clarke_singleton_at_zero(const ReluNetwork& net, int jobs) {
    return !sign_vector_sweep(net, jobs).positive_found;
}

// --- directional construction ---------------------------------------------------

namespace {

RatMat sylvester(int p) {
    RatMat h(1, 1);
    h.at(0, 0) = 1;
    while (h.rows < p) {
        RatMat next(2 * h.rows, 2 * h.cols);
        for (int r = 0; r < h.rows; ++r) {
            for (int c = 0; c < h.cols; ++c) {
                next.at(r, c) = h.at(r, c);
                next.at(r, h.cols + c) = h.at(r, c);
                next.at(h.rows + r, c) = h.at(r, c);
                next.at(h.rows + r, h.cols + c) = -h.at(r, c);
            }
        }
        h = std::move(next);
    }
    return h;
}

// (x, B, M) |-> (1/p) sum_i |[U B^T M x]_i| over {+, x, +c, xc, relu}.
// Inputs: x, then B row-major, then M row-major.
Program directional_program(const RatMat& u) {
    const int p = u.rows;
    const int x0 = 0;            // slot offset of x (1-based slots x0+1 ...)
    const int b0 = p;            // B[r][c] at slot b0 + r*p + c + 1
    const int m0 = p + p * p;    // M[r][c] at slot m0 + r*p + c + 1
    std::vector<ProgramNode> nodes;
    int inputs = p + 2 * p * p;
    auto emit = [&](Op op, std::vector<int> pred) {
        nodes.push_back(ProgramNode::make(std::move(op), std::move(pred)));
        return inputs + static_cast<int>(nodes.size());
    };
    auto matvec_inputs = [&](int base, bool transpose, const std::vector<int>& v) {
        std::vector<int> out(static_cast<size_t>(p));
        for (int r = 0; r < p; ++r) {
            int acc = 0;
            for (int c = 0; c < p; ++c) {
                const int w = transpose ? base + c * p + r + 1 : base + r * p + c + 1;
                int prod = emit(Op::mul(), {w, v[static_cast<size_t>(c)]});
                acc = c == 0 ? prod : emit(Op::add(), {acc, prod});
            }
            out[static_cast<size_t>(r)] = acc;
        }
        return out;
    };

    std::vector<int> x(static_cast<size_t>(p));
    for (int j = 0; j < p; ++j) x[static_cast<size_t>(j)] = x0 + j + 1;
    std::vector<int> t = matvec_inputs(m0, false, x); // t = M x
    std::vector<int> s = matvec_inputs(b0, true, t);  // s = B^T t
    std::vector<int> r(static_cast<size_t>(p));       // r = U s, U constant
    for (int i = 0; i < p; ++i) {
        int acc = 0;
        for (int j = 0; j < p; ++j) {
            int prod = emit(Op::mul_const(u.at(i, j)), {s[static_cast<size_t>(j)]});
            acc = j == 0 ? prod : emit(Op::add(), {acc, prod});
        }
        r[static_cast<size_t>(i)] = acc;
    }
    int sum = 0;
    for (int i = 0; i < p; ++i) {
        int neg = emit(Op::mul_const(Rat(-1)), {r[static_cast<size_t>(i)]});
        int h1 = emit(Op::relu(), {r[static_cast<size_t>(i)]});
        int h2 = emit(Op::relu(), {neg});
        int abs_i = emit(Op::add(), {h1, h2});
        sum = i == 0 ? abs_i : emit(Op::add(), {sum, abs_i});
    }
    emit(Op::mul_const(Rat(1, p)), {sum});
    return build_program(inputs, 1, std::move(nodes));
}

} // namespace

DirectionalInstance build_directional_instance(int p, uint64_t seed) {
    if (p != 2 && p != 4 && p != 8 && p != 16)
        throw DimensionError("directional instance needs p in {2, 4, 8, 16}");
    DirectionalInstance inst;
    inst.p = p;
    inst.seed = seed;
    inst.U = sylvester(p);

    std::mt19937_64 rng(seed);
    auto small_int = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
    };
    std::optional<RatMat> inv;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        RatMat bmat(p, p), mmat(p, p);
        for (int r = 0; r < p; ++r) {
            for (int c = 0; c < p; ++c) {
                bmat.at(r, c) = small_int(-3, 3);
                mmat.at(r, c) = small_int(-3, 3);
            }
        }
        RatMat btm = mat_mul(bmat.transpose(), mmat);
        inv = mat_inverse(btm);
        if (!inv) continue;
        bool bounded = true;
        for (const Rat& v : inv->a)
            if (rat_abs(v) > 1000) bounded = false;
        if (!bounded) {
            inv.reset();
            continue;
        }
        inst.B = std::move(bmat);
        inst.M = std::move(mmat);
        break;
    }
    if (!inv) throw SingularityError("could not sample a nonsingular B^T M");

    inst.lambda.resize(static_cast<size_t>(p));
    inst.A = RatMat(p, p);
    for (int i = 0; i < p; ++i) {
        inst.lambda[static_cast<size_t>(i)] = Rat(small_int(2, 8), 4); // in [1/2, 2]
        for (int r = 0; r < p; ++r)
            inst.A.at(r, i) = inst.lambda[static_cast<size_t>(i)] * inv->at(r, i);
    }
    inst.pf = directional_program(inst.U);

    // The construction enforces sign(U B^T M a_i) = u_i; verify it anyway.
    RatMat ubtma = mat_mul(inst.U, mat_mul(mat_mul(inst.B.transpose(), inst.M), inst.A));
    for (int i = 0; i < p; ++i)
        for (int r = 0; r < p; ++r)
            if (rat_sign(ubtma.at(r, i)) != rat_sign(inst.U.at(r, i)))
                throw ConstraintViolated("sign constraint failed on the sampled instance");
    return inst;
}

DirectionalReport directional_check(const DirectionalInstance& inst) {
    DirectionalReport rep;
    const int p = inst.p;

    RatMat btm = mat_mul(inst.B.transpose(), inst.M);
    RatMat ubtma = mat_mul(inst.U, mat_mul(btm, inst.A));
    rep.constraints_ok = true;
    for (int i = 0; i < p && rep.constraints_ok; ++i)
        for (int r = 0; r < p; ++r)
            if (rat_sign(ubtma.at(r, i)) != rat_sign(inst.U.at(r, i)))
                rep.constraints_ok = false;
    if (!rep.constraints_ok) throw ConstraintViolated("instance violates the sign constraints");

    // b_i^T M a_i, exact.
    RatMat btma = mat_mul(btm, inst.A);
    std::vector<Rat> expected(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) expected[static_cast<size_t>(i)] = btma.at(i, i);

    // (a) One-sided finite differences of the program along (a_i, 0, 0) at
    // x = 0, with decreasing steps for consistency.
    std::vector<double> base(static_cast<size_t>(p + 2 * p * p), 0.0);
    for (int r = 0; r < p; ++r) {
        for (int c = 0; c < p; ++c) {
            base[static_cast<size_t>(p + r * p + c)] = rat_to_double(inst.B.at(r, c));
            base[static_cast<size_t>(p + p * p + r * p + c)] =
                rat_to_double(inst.M.at(r, c));
        }
    }
    const double f0 = evaluate(inst.pf, base)[0];
    rep.derivatives_ok = true;
    for (int i = 0; i < p; ++i) {
        const double want = rat_to_double(expected[static_cast<size_t>(i)]);
        for (double step : {1e-4, 1e-5, 1e-6}) {
            std::vector<double> z = base;
            for (int r = 0; r < p; ++r)
                z[static_cast<size_t>(r)] += step * rat_to_double(inst.A.at(r, i));
            const double est = (evaluate(inst.pf, z)[0] - f0) / step;
            rep.max_derivative_err = std::max(rep.max_derivative_err, std::abs(est - want));
        }
    }
    rep.derivatives_ok = rep.max_derivative_err <= 1e-8;

    // (b) Sum of the directional derivatives vs Tr(M A B^T), exact; the
    // derivative values themselves come out of the exact program evaluation at
    // a_i (one-sided derivative of a positively homogeneous function).
    RatMat mabt = mat_mul(inst.M, mat_mul(inst.A, inst.B.transpose()));
    rep.trace_value = 0;
    for (int i = 0; i < p; ++i) rep.trace_value += mabt.at(i, i);
    Rat sum = 0;
    for (int i = 0; i < p; ++i) {
        std::vector<Rat> z(static_cast<size_t>(p + 2 * p * p), Rat(0));
        for (int r = 0; r < p; ++r) {
            z[static_cast<size_t>(r)] = inst.A.at(r, i);
            for (int c = 0; c < p; ++c) {
                z[static_cast<size_t>(p + r * p + c)] = inst.B.at(r, c);
                z[static_cast<size_t>(p + p * p + r * p + c)] = inst.M.at(r, c);
            }
        }
        sum += evaluate(inst.pf, z)[0];
    }
    rep.trace_ok = sum == rep.trace_value;

    // (c) Finite-difference gradient of G(M') = Tr(M' A B^T) against B A^T.
    RatMat bat = mat_mul(inst.B, inst.A.transpose());
    auto g_of = [&](const std::vector<double>& m_entries) {
        double tr = 0;
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                double abt = 0;
                for (int c = 0; c < p; ++c)
                    abt += rat_to_double(inst.A.at(j, c)) * rat_to_double(inst.B.at(i, c));
                tr += m_entries[static_cast<size_t>(i * p + j)] * abt;
            }
        }
        return tr;
    };
    std::vector<double> m_entries(static_cast<size_t>(p * p));
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c)
            m_entries[static_cast<size_t>(r * p + c)] = rat_to_double(inst.M.at(r, c));
    const double h = 1e-3;
    for (int r = 0; r < p; ++r) {
        for (int c = 0; c < p; ++c) {
            std::vector<double> up = m_entries, dn = m_entries;
            up[static_cast<size_t>(r * p + c)] += h;
            dn[static_cast<size_t>(r * p + c)] -= h;
            const double fd = (g_of(up) - g_of(dn)) / (2 * h);
            rep.max_gradient_err =
                std::max(rep.max_gradient_err, std::abs(fd - rat_to_double(bat.at(r, c))));
        }
    }
    rep.gradient_ok = rep.max_gradient_err <= 1e-6;
    return rep;
}

} // namespace nsad
