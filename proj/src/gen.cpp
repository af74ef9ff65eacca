#include "nsad/gen.hpp"

#include <algorithm>

namespace nsad {

Program gen_cost_program(Rng& rng, int min_nodes, int max_nodes) {
    const int p = rng.uniform(1, 6);
    const int n = rng.uniform(min_nodes, max_nodes);
    std::vector<ProgramNode> nodes;
    nodes.reserve(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) {
        const int top = p + t; // highest referencable slot
        auto slot = [&] { return rng.uniform(1, top); };
        Op op;
        switch (rng.uniform(0, 7)) {
            case 0: op = Op::add(); break;
            case 1: op = Op::mul(); break;
            case 2: op = Op::add_const(rng.rat(-8, 8, 4)); break;
            case 3: op = Op::mul_const(rng.rat(-8, 8, 4)); break;
            case 4: op = Op::inv(); break;
            case 5: op = Op::exp(); break;
            case 6: op = Op::log(); break;
            default: op = Op::relu(); break;
        }
        std::vector<int> pred;
        for (int a = 0; a < op.arity; ++a) pred.push_back(slot());
        nodes.push_back(ProgramNode::make(std::move(op), std::move(pred)));
    }
    return build_program(p, 1, std::move(nodes));
}

Program gen_eval_program(Rng& rng, int p, int n_nodes) {
    std::vector<ProgramNode> nodes;
    nodes.reserve(static_cast<size_t>(n_nodes));
    for (int t = 0; t < n_nodes; ++t) {
        const int top = p + t;
        // Bias toward recent slots so the graph stays deep.
        auto slot = [&] {
            if (t > 0 && rng.chance(60)) return rng.uniform(std::max(1, top - 8), top);
            return rng.uniform(1, top);
        };
        const int roll = rng.uniform(1, 100);
        if (roll <= 30) {
            nodes.push_back(ProgramNode::make(Op::add(), {slot(), slot()}));
        } else if (roll <= 45) {
            // One operand stays an input slot, keeping polynomial degree low.
            nodes.push_back(ProgramNode::make(Op::mul(), {rng.uniform(1, p), slot()}));
        } else if (roll <= 55) {
            nodes.push_back(ProgramNode::make(Op::add_const(rng.rat(-8, 8, 4)), {slot()}));
        } else if (roll <= 65) {
            nodes.push_back(ProgramNode::make(Op::mul_const(rng.rat(-4, 4, 4)), {slot()}));
        } else {
            nodes.push_back(ProgramNode::make(Op::relu(), {slot()}));
        }
    }
    return build_program(p, 1, std::move(nodes));
}

Program gen_pwl_program(Rng& rng, int p, int n_nodes) {
    std::vector<ProgramNode> nodes;
    nodes.reserve(static_cast<size_t>(n_nodes));
    for (int t = 0; t < n_nodes; ++t) {
        const int top = p + t;
        auto slot = [&] {
            if (t > 0 && rng.chance(60)) return rng.uniform(std::max(1, top - 8), top);
            return rng.uniform(1, top);
        };
        const int roll = rng.uniform(1, 100);
        if (roll <= 25) {
            nodes.push_back(ProgramNode::make(Op::add(), {slot(), slot()}));
        } else if (roll <= 45) {
            nodes.push_back(ProgramNode::make(Op::add_const(rng.rat(-8, 8, 4)), {slot()}));
        } else if (roll <= 85) {
            // Contracting scale factors keep slope jumps at kink crossings
            // small next to the discretization tolerance.
            nodes.push_back(ProgramNode::make(Op::mul_const(rng.rat(-3, 3, 8)), {slot()}));
        } else {
            nodes.push_back(ProgramNode::make(Op::relu(), {slot()}));
        }
    }
    return build_program(p, 1, std::move(nodes));
}

Program gen_d0_program(Rng& rng, int p, int n_nodes) {
    std::vector<ProgramNode> nodes;
    // Consume every input first.
    for (int j = 1; j + 1 <= p; j += 2)
        nodes.push_back(ProgramNode::make(rng.chance(50) ? Op::add() : Op::sub(),
                                          {j, j + 1}));
    if (p % 2 == 1) nodes.push_back(ProgramNode::make(Op::add(), {p, 1}));
    const int n = std::max(n_nodes, static_cast<int>(nodes.size()) + 1);
    while (static_cast<int>(nodes.size()) < n) {
        const int top = p + static_cast<int>(nodes.size());
        auto slot = [&] { return rng.uniform(1, top); };
        switch (rng.uniform(0, 2)) {
            case 0: nodes.push_back(ProgramNode::make(Op::add(), {slot(), slot()})); break;
            case 1: nodes.push_back(ProgramNode::make(Op::sub(), {slot(), slot()})); break;
            default: nodes.push_back(ProgramNode::make(Op::relu(), {slot()})); break;
        }
    }
    return build_program(p, 1, std::move(nodes));
}

ReluNetwork gen_ternary_net(Rng& rng, int p, int max_width, int layers, int relu_budget) {
    ReluNetwork net;
    int prev = p;
    int relus_left = relu_budget;
    for (int l = 0; l < layers; ++l) {
        const bool last = l + 1 == layers;
        const int rows = last ? 1 : rng.uniform(1, max_width);
        RatMat m(rows, prev);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < prev; ++c)
                if (!rng.chance(40)) m.at(r, c) = rng.chance(50) ? 1 : -1;
        net.mats.push_back(std::move(m));
        if (!last) {
            std::vector<uint8_t> mask(static_cast<size_t>(rows), 0);
            for (int r = 0; r < rows; ++r) {
                if (relus_left > 0 && rng.chance(70)) {
                    mask[static_cast<size_t>(r)] = 1;
                    --relus_left;
                }
            }
            net.masks.push_back(std::move(mask));
        }
        prev = rows;
    }
    net.validate();
    return net;
}

CnfFormula gen_cnf(Rng& rng, int var_count, int clause_count) {
    CnfFormula cnf;
    cnf.var_count = var_count;
    for (int c = 0; c < clause_count; ++c) {
        std::vector<int> vars;
        while (static_cast<int>(vars.size()) < 3) {
            int v = rng.uniform(1, var_count);
            if (var_count < 3 ||
                std::find(vars.begin(), vars.end(), v) == vars.end())
                vars.push_back(v);
        }
        std::array<int, 3> clause;
        for (int t = 0; t < 3; ++t)
            clause[static_cast<size_t>(t)] = rng.chance(50) ? vars[static_cast<size_t>(t)]
                                                            : -vars[static_cast<size_t>(t)];
        cnf.clauses.push_back(clause);
    }
    return cnf;
}

} // namespace nsad
