// Command-line front end: evaluation, differentiation, cost audits,
// program/network conversion, SAT gadgets, conservative-gradient enumeration
// and the directional-derivative demo. JSON on stdout, diagnostics on stderr.
// Exit codes: 0 success, 1 domain/budget error, 2 input error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsad/audit.hpp"
#include "nsad/engine.hpp"
#include "nsad/enumerate.hpp"
#include "nsad/errors.hpp"
#include "nsad/hardness.hpp"
#include "nsad/relu_net.hpp"
#include "nsad/serialize.hpp"
#include "nsad/sweep.hpp"

namespace {

using namespace nsad;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<Rat> parse_vector(const std::string& csv) {
    std::vector<Rat> out;
    for (const auto& tok : split(csv, ','))
        if (!tok.empty()) out.push_back(rat_from_string(tok));
    if (out.empty()) throw ParseError("empty --x vector");
    return out;
}

std::vector<double> to_doubles(const std::vector<Rat>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const Rat& r : v) out.push_back(rat_to_double(r));
    return out;
}

SelectionPolicy parse_policy(const std::string& text) {
    SelectionPolicy policy;
    if (text.empty()) return policy;
    for (const auto& item : split(text, ',')) {
        auto kv = split(item, '=');
        if (kv.size() != 2) throw ParseError("bad --policy entry '" + item + "'");
        if (kv[0] == "relu0")
            policy.relu_at_zero = rat_from_string(kv[1]);
        else if (kv[0] == "abs0")
            policy.abs_at_zero = rat_from_string(kv[1]);
        else
            throw ParseError("unknown policy key '" + kv[0] + "'");
    }
    policy.validate();
    return policy;
}

CostScheme parse_scheme(const std::string& text) {
    if (text.empty() || text == "unit") return CostScheme::unit();
    const std::string prefix = "weighted:";
    if (text.rfind(prefix, 0) != 0)
        throw ParseError("bad --scheme, use unit or weighted:c_nonlin=..,c_relu=..");
    Rat c_nl = 1, c_r = 1;
    for (const auto& item : split(text.substr(prefix.size()), ',')) {
        auto kv = split(item, '=');
        if (kv.size() != 2) throw ParseError("bad --scheme entry '" + item + "'");
        if (kv[0] == "c_nonlin")
            c_nl = rat_from_string(kv[1]);
        else if (kv[0] == "c_relu")
            c_r = rat_from_string(kv[1]);
        else
            throw ParseError("unknown scheme key '" + kv[0] + "'");
    }
    return CostScheme::weighted(c_nl, c_r);
}

void emit(const Json& j) { std::cout << dump_json(j); }

Json rat_vector_json(const std::vector<Rat>& v) {
    Json arr = Json::array();
    for (const Rat& r : v) arr.push_back(rat_to_json(r));
    return arr;
}

struct Options {
    std::string program_file, net_file, cnf_file, out_file;
    std::string x_csv, policy_text, scheme_text = "unit", mode = "bwd", positional;
    bool exact = false;
    bool text = false;
    int p = 4;
    int n = 8;
    int jobs = 0;
    std::uint64_t seed = 0;
};

int run_eval(const Options& opt) {
    Program prog = load_program(opt.program_file);
    std::vector<Rat> x = parse_vector(opt.x_csv);
    Json j;
    if (opt.exact) {
        j["y"] = rat_vector_json(evaluate(prog, x));
    } else {
        j["y"] = evaluate(prog, to_doubles(x));
    }
    emit(j);
    return 0;
}

int run_grad(const Options& opt) {
    Program prog = load_program(opt.program_file);
    std::vector<Rat> x = parse_vector(opt.x_csv);
    SelectionPolicy policy = parse_policy(opt.policy_text);
    CostScheme scheme = parse_scheme(opt.scheme_text);
    const bool forward = opt.mode == "fwd";
    if (!forward && opt.mode != "bwd") throw ParseError("--mode must be fwd or bwd");
    Json j;
    if (opt.exact) {
        GradResult<Rat> g = forward ? forprop(prog, x, policy) : backprop(prog, x, policy);
        j["value"] = rat_to_json(g.value);
        j["grad"] = rat_vector_json(g.grad);
    } else {
        std::vector<double> xd = to_doubles(x);
        GradResult<double> g =
            forward ? forprop(prog, xd, policy) : backprop(prog, xd, policy);
        j["value"] = g.value;
        j["grad"] = g.grad;
    }
    j["cost_report"] = cost_report_to_json(audit(prog, scheme));
    emit(j);
    return 0;
}

int run_cost(const Options& opt) {
    CostScheme scheme = parse_scheme(opt.scheme_text);
    if (opt.positional == "table") {
        std::vector<OpTableRow> rows =
            scheme.is_unit() ? op_table_unit()
                             : op_table_weighted(scheme.c_nonlin(), scheme.c_relu());
        if (opt.text) {
            std::cout << render_op_table(rows);
            if (!scheme.is_unit())
                std::cout << render_op_table(
                    op_table_extended(scheme.c_nonlin(), scheme.c_relu(), opt.n));
            return 0;
        }
        Json j;
        j["scheme"] = scheme.describe();
        j["table"] = op_table_to_json(rows);
        if (!scheme.is_unit())
            j["extended"] = op_table_to_json(
                op_table_extended(scheme.c_nonlin(), scheme.c_relu(), opt.n));
        emit(j);
        return 0;
    }
    Program prog = load_program(opt.positional);
    CostReport rep = audit(prog, scheme);
    if (opt.text) {
        std::cout << "cost          " << rat_to_string(rep.cost_p) << "\n"
                  << "cost_backprop " << rat_to_string(rep.cost_backprop) << "\n"
                  << "cost_forprop  " << rat_to_string(rep.cost_forprop) << "\n"
                  << "ratio_b       " << rat_to_string(rep.ratio_b) << "\n"
                  << "ratio_f       " << rat_to_string(rep.ratio_f) << "\n";
        if (rep.omega_finite)
            std::cout << "omega_b       " << rat_to_string(rep.omega_b) << "\n"
                      << "omega_f       " << rat_to_string(rep.omega_f) << "\n";
        return 0;
    }
    emit(cost_report_to_json(rep));
    return 0;
}

int run_sat_encode(const Options& opt) {
    std::ifstream in(opt.cnf_file);
    if (!in) throw ParseError("cannot open " + opt.cnf_file);
    CnfFormula cnf = parse_dimacs(in);
    ReluNetwork net = encode_3sat(cnf);
    if (!opt.out_file.empty()) {
        save_net(opt.out_file, net);
        Json j;
        j["written"] = opt.out_file;
        j["inputs"] = net.input_dim();
        j["layers"] = net.layer_count();
        j["relu_layers"] = net.layer_count() - 1;
        emit(j);
    } else {
        emit(net_to_json(net));
    }
    return 0;
}

int run_sat_check(const Options& opt) {
    std::ifstream in(opt.cnf_file);
    if (!in) throw ParseError("cannot open " + opt.cnf_file);
    CnfFormula cnf = parse_dimacs(in);
    ReluNetwork net = encode_3sat(cnf);
    SignSweepResult res = sign_vector_sweep(net, opt.jobs);
    Json j;
    j["satisfiable"] = res.positive_found;
    if (res.positive_found) j["witness"] = res.witness;
    emit(j);
    return 0;
}

int run_enum(const Options& opt) {
    ReluNetwork net = load_net(opt.net_file);
    std::vector<Rat> x = parse_vector(opt.x_csv);
    EnumVerdict verdict = decide_singleton(net, x, opt.seed);
    if (verdict.branch == WitnessBranch::Randomized)
        std::cerr << "witness came from the randomized fallback\n";
    emit(verdict_to_json(verdict));
    return 0;
}

int run_convert_prog2net(const Options& opt) {
    Program prog = load_program(opt.program_file);
    NetFromProgram res = net_from_program(prog);
    if (!opt.out_file.empty()) {
        save_net(opt.out_file, res.net);
        Json j;
        j["written"] = opt.out_file;
        j["kept_inputs"] = res.kept_inputs;
        j["size"] = rat_to_json(Rat(res.net.representation_size()));
        emit(j);
    } else {
        emit(net_to_json(res.net));
    }
    return 0;
}

int run_convert_net2prog(const Options& opt) {
    ReluNetwork net = load_net(opt.net_file);
    Program prog = program_from_net(net);
    if (!opt.out_file.empty()) {
        save_program(opt.out_file, prog);
        Json j;
        j["written"] = opt.out_file;
        j["cost"] = rat_to_json(program_cost(prog, CostScheme::unit()));
        emit(j);
    } else {
        emit(program_to_json(prog));
    }
    return 0;
}

int run_ddemo(const Options& opt) {
    DirectionalInstance inst = build_directional_instance(opt.p, opt.seed);
    DirectionalReport rep = directional_check(inst);
    const Rat cost = program_cost(inst.pf, CostScheme::unit());
    const Rat expected = Rat(6 * opt.p * opt.p + 2 * opt.p);
    Json j;
    j["p"] = opt.p;
    j["seed"] = opt.seed;
    j["cost_pf"] = rat_to_json(cost);
    j["expected_cost"] = rat_to_json(expected);
    j["cost_ok"] = cost == expected;
    j["report"] = directional_report_to_json(rep);
    j["instance"] = directional_instance_to_json(inst);
    j["ok"] = rep.all_ok() && cost == expected;
    emit(j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonsmooth autodiff engine with cost audits"};
    app.require_subcommand(1);
    Options opt;

    auto* eval = app.add_subcommand("eval", "evaluate a program");
    eval->add_option("program", opt.program_file)->required();
    eval->add_option("--x", opt.x_csv, "comma-separated input (floats or n/d)")->required();
    eval->add_flag("--exact", opt.exact, "exact rational evaluation");

    auto* grad = app.add_subcommand("grad", "value and conservative gradient");
    grad->add_option("program", opt.program_file)->required();
    grad->add_option("--x", opt.x_csv)->required();
    grad->add_option("--mode", opt.mode, "fwd|bwd (default bwd)");
    grad->add_option("--policy", opt.policy_text, "relu0=<v>,abs0=<v>");
    grad->add_option("--scheme", opt.scheme_text, "unit|weighted:c_nonlin=..,c_relu=..");
    grad->add_flag("--exact", opt.exact);

    auto* cost = app.add_subcommand("cost", "cost audit or published op table");
    cost->add_option("target", opt.positional, "program file or 'table'")->required();
    cost->add_option("--scheme", opt.scheme_text);
    cost->add_option("--n", opt.n, "norm fan-in for the extended table");
    cost->add_flag("--text", opt.text, "aligned text instead of JSON");

    auto* sat = app.add_subcommand("sat", "3-SAT gadget");
    auto* sat_encode = sat->add_subcommand("encode", "DIMACS -> network JSON");
    sat_encode->add_option("cnf", opt.cnf_file)->required();
    sat_encode->add_option("-o,--out", opt.out_file);
    auto* sat_check = sat->add_subcommand("check", "sign-vector satisfiability sweep");
    sat_check->add_option("cnf", opt.cnf_file)->required();
    sat_check->add_option("--jobs", opt.jobs, "worker threads (1 = serial)");
    sat->require_subcommand(1);

    auto* enm = app.add_subcommand("enum", "conservative-gradient singleton decision");
    enm->add_option("network", opt.net_file)->required();
    enm->add_option("--x", opt.x_csv)->required();
    enm->add_option("--seed", opt.seed);

    auto* convert = app.add_subcommand("convert", "program/network conversions");
    auto* p2n = convert->add_subcommand("prog2net");
    p2n->add_option("program", opt.program_file)->required();
    p2n->add_option("-o,--out", opt.out_file);
    auto* n2p = convert->add_subcommand("net2prog");
    n2p->add_option("network", opt.net_file)->required();
    n2p->add_option("-o,--out", opt.out_file);
    convert->require_subcommand(1);

    auto* ddemo = app.add_subcommand("ddemo", "directional-derivative construction checks");
    ddemo->add_option("--p", opt.p, "2, 4, 8 or 16");
    ddemo->add_option("--seed", opt.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*eval) return run_eval(opt);
        if (*grad) return run_grad(opt);
        if (*cost) return run_cost(opt);
        if (*sat_encode) return run_sat_encode(opt);
        if (*sat_check) return run_sat_check(opt);
        if (*enm) return run_enum(opt);
        if (*p2n) return run_convert_prog2net(opt);
        if (*n2p) return run_convert_net2prog(opt);
        if (*ddemo) return run_ddemo(opt);
    } catch (const DomainError& e) {
        std::cerr << "domain error at node " << e.node << ": " << e.what() << "\n";
        return 1;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 1;
    } catch (const SingularityError& e) {
        std::cerr << "singular instance: " << e.what() << "\n";
        return 1;
    } catch (const ConstraintViolated& e) {
        std::cerr << "constraint violated: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
