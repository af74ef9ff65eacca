#include "nsad/audit.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "nsad/errors.hpp"

namespace nsad {

namespace {

Rat node_cost(const ProgramNode& n, const CostScheme& scheme) {
    return n.is_sub() ? program_cost(*n.sub, scheme) : scheme.cost(n.op);
}

Rat node_cost_gd(const ProgramNode& n, const CostScheme& scheme) {
    return n.is_sub() ? cost_backprop_closed(*n.sub, scheme) : scheme.cost_gd(n.op);
}

std::string node_label(const ProgramNode& n) {
    return n.is_sub() ? ("sub:" + n.sub_name) : n.op.name();
}

} // namespace

Rat cost_backprop_closed(const Program& program, const CostScheme& scheme) {
    const Rat acc = scheme.cost(Op::add()) + scheme.cost(Op::mul());
    Rat total = 0;
    for (const auto& n : program.nodes)
        total += node_cost_gd(n, scheme) + Rat(n.pred.size()) * acc;
    return total;
}

Rat cost_forprop_closed(const Program& program, const CostScheme& scheme,
                        int ambient_inputs) {
    const Rat cadd = scheme.cost(Op::add());
    const Rat cmul = scheme.cost(Op::mul());
    const Rat p(ambient_inputs);
    Rat total = 0;
    for (const auto& n : program.nodes) {
        const Rat fanin(n.pred.size());
        total += node_cost_gd(n, scheme) + p * fanin * cmul + p * (fanin - 1) * cadd;
    }
    return total;
}

CostReport audit(const Program& program, const CostScheme& scheme) {
    if (program.outputs != 1)
        throw MultiOutputError("audit requires a single-output program");
    const Rat cadd = scheme.cost(Op::add());
    const Rat cmul = scheme.cost(Op::mul());
    if (cadd <= 0 || cmul <= 0)
        throw UnpricedOpError("cost(+) and cost(x) must be strictly positive");
    const Rat two_max = 2 * std::max(cadd, cmul);

    CostReport rep;
    rep.cost_p = 0;
    rep.cost_backprop = 0;
    rep.cost_forprop = 0;
    rep.omega_b = 0;
    rep.omega_b_pairsum = 0;
    rep.omega_f = 0;

    const Rat p(program.inputs);
    std::map<std::pair<std::string, int>, PerOpRow> rows;
    for (const auto& n : program.nodes) {
        const Rat g = node_cost(n, scheme);
        const Rat gd = node_cost_gd(n, scheme);
        const Rat fanin(n.pred.size());
        rep.cost_p += g;
        rep.cost_backprop += gd + fanin * (cadd + cmul);
        rep.cost_forprop += gd + p * fanin * cmul + p * (fanin - 1) * cadd;
        if (g == 0) {
            rep.omega_finite = false;
        } else if (rep.omega_finite) {
            rep.omega_b = std::max(rep.omega_b, Rat((gd + two_max * fanin) / g));
            rep.omega_b_pairsum =
                std::max(rep.omega_b_pairsum, Rat((gd + fanin * (cadd + cmul)) / g));
            rep.omega_f = std::max(
                rep.omega_f, Rat((gd + p * fanin * cmul + p * (fanin - 1) * cadd) / g));
        }
        auto key = std::make_pair(node_label(n), static_cast<int>(n.pred.size()));
        auto [it, fresh] = rows.try_emplace(key);
        if (fresh) {
            it->second.label = key.first;
            it->second.fanin = key.second;
            it->second.cost_g = g;
            it->second.cost_gd = gd;
            it->second.omega_contrib = g == 0 ? Rat(0) : Rat((gd + two_max * fanin) / g);
        }
        it->second.count += 1;
    }
    if (rep.cost_p == 0)
        throw UnpricedOpError("program has zero total cost; ratios are undefined");
    rep.ratio_b = rep.cost_backprop / rep.cost_p;
    rep.ratio_f = rep.cost_forprop / rep.cost_p;
    rep.per_op.reserve(rows.size());
    for (auto& [key, row] : rows) rep.per_op.push_back(std::move(row));
    return rep;
}

namespace {

OpTableRow make_row(std::string label, Rat g, int fanin, Rat gd, std::optional<Rat> bound) {
    OpTableRow r;
    r.label = std::move(label);
    r.cost_g = g;
    r.fanin = fanin;
    r.cost_gd = gd;
    r.gd_ratio = gd / g;
    r.mul_ratio = Rat(fanin) / g;
    r.omega = (gd + Rat(2 * fanin)) / g; // cost(x) = 1 in both presets
    r.bound = std::move(bound);
    return r;
}

} // namespace

std::vector<OpTableRow> op_table_unit() {
    return {
        make_row("(+,x)", 1, 2, 1, Rat(5)),
        make_row("(+c,xc)", 1, 1, 1, Rat(3)),
        make_row("log", 1, 1, 2, Rat(4)),
        make_row("exp", 1, 1, 1, Rat(3)),
        make_row("inv", 1, 1, 3, Rat(5)),
        make_row("relu", 1, 1, 1, Rat(3)),
    };
}

std::vector<OpTableRow> op_table_weighted(const Rat& c_nonlin, const Rat& c_relu) {
    return {
        make_row("(+,x)", 1, 2, 1, Rat(5)),
        make_row("(+c,xc)", 1, 1, 1, Rat(3)),
        make_row("log", c_nonlin, 1, 2 * c_nonlin, Rat(4)),
        make_row("exp", c_nonlin, 1, c_nonlin, Rat(3)),
        make_row("inv", c_nonlin, 1, c_nonlin + 2, Rat(5)),
        make_row("xrelu", 1 + c_relu, 2, 1 + c_relu, Rat(5)),
    };
}

std::vector<OpTableRow> op_table_extended(const Rat& c_nonlin, const Rat& c_relu, int n) {
    const Rat nr(n);
    return {
        make_row("(+,x)", 1, 2, 1, Rat(5)),
        make_row("abs", 1 + c_relu, 1, 1 + c_relu, Rat(3)),
        make_row("elu", 2 + c_relu + c_nonlin, 1, 2 + c_relu + c_nonlin, Rat(2)),
        make_row("max-pool-3x3", 153 + 8 * c_relu, 9, 153 + 8 * c_relu, Rat(28, 25)),
        make_row("norm-inf", nr + 2 * nr * c_relu - 1, n, nr + 2 * nr * c_relu - 1,
                 Rat(3)),
        make_row("norm1", nr * (2 + c_relu) - 1, n, nr * (2 + c_relu) - 1, Rat(2)),
    };
}

// Ops as columns, one metric per row, like the published tables.
std::string render_op_table(const std::vector<OpTableRow>& rows) {
    std::vector<std::vector<std::string>> cells(5);
    cells[0] = {"g"};
    cells[1] = {"cost(g)"};
    cells[2] = {"|pr|"};
    cells[3] = {"cost(gd)"};
    cells[4] = {"omega"};
    for (const auto& r : rows) {
        cells[0].push_back(r.label);
        cells[1].push_back(rat_to_string(r.cost_g));
        cells[2].push_back(std::to_string(r.fanin));
        cells[3].push_back(rat_to_string(r.cost_gd));
        cells[4].push_back(rat_to_string(r.omega));
    }
    std::vector<size_t> width(cells[0].size(), 0);
    for (const auto& row : cells)
        for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream os;
    for (const auto& row : cells) {
        for (size_t c = 0; c < row.size(); ++c) {
            os << (c == 0 ? "| " : " | ") << row[c]
               << std::string(width[c] - row[c].size(), ' ');
        }
        os << " |\n";
    }
    return os.str();
}

Rat instrumented_run(const Program& program, std::span<const double> input, RunMode mode,
                     const CostScheme& scheme, const SelectionPolicy& policy) {
    OpCounter counter;
    counter.scheme = &scheme;
    switch (mode) {
        case RunMode::Eval:
            evaluate(program, input, nullptr, &counter);
            break;
        case RunMode::Backprop:
            backprop(program, input, policy, nullptr, &counter);
            break;
        case RunMode::Forprop:
            forprop(program, input, policy, {}, nullptr, &counter);
            break;
    }
    return counter.weighted;
}

} // namespace nsad
