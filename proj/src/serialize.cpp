#include "nsad/serialize.hpp"

#include <fstream>
#include <set>

#include "nsad/errors.hpp"

namespace nsad {

Json rat_to_json(const Rat& r) {
    if (denominator(r) == 1) {
        const Int& n = numerator(r);
        if (n >= Int(-9007199254740992LL) && n <= Int(9007199254740992LL))
            return Json(n.convert_to<long long>());
    }
    return Json(rat_to_string(r));
}

Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
    if (j.is_number_float()) return rat_from_double(j.get<double>());
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    throw ParseError("expected a rational (number or \"n/d\" string)");
}

std::string dump_json(const Json& j) { return j.dump() + "\n"; }

// --- programs ------------------------------------------------------------------

namespace {

// Stable names for the distinct subprograms of one file, in first-use order.
void collect_subs(const Program& program,
                  std::vector<std::pair<std::string, std::shared_ptr<const Program>>>& out,
                  std::set<const Program*>& seen) {
    for (const auto& n : program.nodes) {
        if (!n.is_sub()) continue;
        if (seen.insert(n.sub.get()).second) {
            std::string name =
                n.sub_name.empty() ? "s" + std::to_string(out.size() + 1) : n.sub_name;
            out.emplace_back(name, n.sub);
            collect_subs(*n.sub, out, seen);
        }
    }
}

std::string sub_ref_name(
    const std::shared_ptr<const Program>& sub,
    const std::vector<std::pair<std::string, std::shared_ptr<const Program>>>& subs) {
    for (const auto& [name, prog] : subs)
        if (prog.get() == sub.get()) return name;
    return "";
}

} // namespace

Json program_to_json(const Program& program) {
    std::vector<std::pair<std::string, std::shared_ptr<const Program>>> subs;
    std::set<const Program*> seen;
    collect_subs(program, subs, seen);

    Json j;
    j["p"] = program.inputs;
    j["q"] = program.outputs;
    Json nodes = Json::array();
    for (const auto& n : program.nodes) {
        Json node;
        if (n.is_sub()) {
            node["op"] = "call";
            node["args"] = n.pred;
            node["sub"] = sub_ref_name(n.sub, subs);
        } else {
            node["op"] = n.op.name();
            node["args"] = n.pred;
            if (n.op.has_payload()) node["const"] = rat_to_json(n.op.payload);
        }
        nodes.push_back(std::move(node));
    }
    j["nodes"] = std::move(nodes);
    return j;
}

Program program_from_json(const Json& j, const SubprogramMap& subs) {
    if (!j.is_object() || !j.contains("p") || !j.contains("q") || !j.contains("nodes"))
        throw ParseError("program JSON needs p, q and nodes");
    const int p = j.at("p").get<int>();
    const int q = j.at("q").get<int>();
    std::vector<ProgramNode> nodes;
    for (const Json& nj : j.at("nodes")) {
        if (!nj.contains("op") || !nj.contains("args"))
            throw ParseError("program node needs op and args");
        const std::string opname = nj.at("op").get<std::string>();
        std::vector<int> args = nj.at("args").get<std::vector<int>>();
        if (opname == "call") {
            const std::string ref = nj.at("sub").get<std::string>();
            auto it = subs.find(ref);
            if (it == subs.end())
                throw ParseError("unresolved subprogram reference '" + ref + "'");
            nodes.push_back(ProgramNode::call(it->second, ref, std::move(args)));
            continue;
        }
        Op op;
        if (is_builtin_op_name(opname)) {
            op.kind = op_kind_from_name(opname);
            op.arity = static_cast<int>(args.size());
            switch (op.kind) {
                case OpKind::Add:
                case OpKind::Sub:
                case OpKind::Mul:
                    op.arity = 2;
                    break;
                case OpKind::MaxK:
                case OpKind::MinK:
                case OpKind::MedianK:
                case OpKind::Norm1:
                case OpKind::NormInf:
                    break;
                default:
                    op.arity = 1;
                    break;
            }
            if (nj.contains("const")) op.payload = rat_from_json(nj.at("const"));
            if (op.has_payload() && !nj.contains("const"))
                throw ParseError("op " + opname + " needs a const payload");
        } else {
            op = Op::custom(opname, static_cast<int>(args.size()));
        }
        nodes.push_back(ProgramNode::make(std::move(op), std::move(args)));
    }
    return build_program(p, q, std::move(nodes));
}

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    std::filesystem::path s = path;
    s.replace_extension(".subs.json");
    return s;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("bad JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

} // namespace

void save_program(const std::filesystem::path& path, const Program& program) {
    std::vector<std::pair<std::string, std::shared_ptr<const Program>>> subs;
    std::set<const Program*> seen;
    collect_subs(program, subs, seen);

    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << dump_json(program_to_json(program));

    if (subs.empty()) return;
    Json sidecar;
    for (const auto& [name, prog] : subs) {
        std::filesystem::path sub_path = path;
        sub_path.replace_extension("." + name + ".json");
        sidecar[name] = sub_path.filename().string();
        std::ofstream sout(sub_path);
        if (!sout) throw ParseError("cannot write " + sub_path.string());
        sout << dump_json(program_to_json(*prog));
    }
    std::ofstream side(sidecar_path(path));
    side << dump_json(sidecar);
}

Program load_program(const std::filesystem::path& path) {
    Json j = read_json_file(path);
    bool has_call = false;
    for (const Json& nj : j.at("nodes"))
        if (nj.value("op", "") == "call") has_call = true;
    SubprogramMap subs;
    if (has_call) {
        Json sidecar = read_json_file(sidecar_path(path));
        for (auto it = sidecar.begin(); it != sidecar.end(); ++it) {
            std::filesystem::path sub_path =
                path.parent_path() / it.value().get<std::string>();
            subs[it.key()] =
                std::make_shared<const Program>(load_program(sub_path));
        }
    }
    return program_from_json(j, subs);
}

// --- networks --------------------------------------------------------------------

Json net_to_json(const ReluNetwork& net) {
    Json j;
    j["L"] = net.layer_count();
    Json mats = Json::array();
    for (const auto& m : net.mats) {
        Json rows = Json::array();
        for (int r = 0; r < m.rows; ++r) {
            Json row = Json::array();
            for (int c = 0; c < m.cols; ++c) row.push_back(rat_to_json(m.at(r, c)));
            rows.push_back(std::move(row));
        }
        mats.push_back(std::move(rows));
    }
    j["mats"] = std::move(mats);
    Json masks = Json::array();
    for (const auto& mask : net.masks) {
        Json row = Json::array();
        for (uint8_t f : mask) row.push_back(static_cast<int>(f));
        masks.push_back(std::move(row));
    }
    j["masks"] = std::move(masks);
    return j;
}

ReluNetwork net_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("L") || !j.contains("mats") || !j.contains("masks"))
        throw ParseError("network JSON needs L, mats and masks");
    ReluNetwork net;
    for (const Json& mj : j.at("mats")) {
        if (!mj.is_array() || mj.empty()) throw ParseError("empty matrix in network JSON");
        RatMat m(static_cast<int>(mj.size()), static_cast<int>(mj.at(0).size()));
        for (int r = 0; r < m.rows; ++r) {
            const Json& row = mj.at(static_cast<size_t>(r));
            if (static_cast<int>(row.size()) != m.cols)
                throw ParseError("ragged matrix in network JSON");
            for (int c = 0; c < m.cols; ++c)
                m.at(r, c) = rat_from_json(row.at(static_cast<size_t>(c)));
        }
        net.mats.push_back(std::move(m));
    }
    for (const Json& mj : j.at("masks")) {
        std::vector<uint8_t> mask;
        for (const Json& f : mj) mask.push_back(f.get<int>() ? 1 : 0);
        net.masks.push_back(std::move(mask));
    }
    if (j.at("L").get<int>() != net.layer_count())
        throw ParseError("declared layer count does not match the matrices");
    net.validate();
    return net;
}

void save_net(const std::filesystem::path& path, const ReluNetwork& net) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << dump_json(net_to_json(net));
}

ReluNetwork load_net(const std::filesystem::path& path) {
    return net_from_json(read_json_file(path));
}

// --- reports ---------------------------------------------------------------------

Json cost_report_to_json(const CostReport& report) {
    Json j;
    j["cost"] = rat_to_json(report.cost_p);
    j["cost_backprop"] = rat_to_json(report.cost_backprop);
    j["cost_forprop"] = rat_to_json(report.cost_forprop);
    j["ratio_b"] = rat_to_json(report.ratio_b);
    j["ratio_f"] = rat_to_json(report.ratio_f);
    if (report.omega_finite) {
        j["omega_b"] = rat_to_json(report.omega_b);
        j["omega_b_pairsum"] = rat_to_json(report.omega_b_pairsum);
        j["omega_f"] = rat_to_json(report.omega_f);
    } else {
        j["omega_b"] = nullptr;
        j["omega_b_pairsum"] = nullptr;
        j["omega_f"] = nullptr;
    }
    Json rows = Json::array();
    for (const auto& r : report.per_op) {
        Json row;
        row["op"] = r.label;
        row["fanin"] = r.fanin;
        row["count"] = r.count;
        row["cost_g"] = rat_to_json(r.cost_g);
        row["cost_gd"] = rat_to_json(r.cost_gd);
        row["omega_contrib"] = rat_to_json(r.omega_contrib);
        rows.push_back(std::move(row));
    }
    j["per_op"] = std::move(rows);
    return j;
}

Json op_table_to_json(const std::vector<OpTableRow>& rows) {
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json row;
        row["op"] = r.label;
        row["cost_g"] = rat_to_json(r.cost_g);
        row["fanin"] = r.fanin;
        row["cost_gd"] = rat_to_json(r.cost_gd);
        row["gd_ratio"] = rat_to_json(r.gd_ratio);
        row["mul_ratio"] = rat_to_json(r.mul_ratio);
        row["omega"] = rat_to_json(r.omega);
        if (r.bound) row["bound"] = rat_to_json(*r.bound);
        arr.push_back(std::move(row));
    }
    return arr;
}

Json verdict_to_json(const EnumVerdict& verdict) {
    Json j;
    j["singleton"] = verdict.singleton;
    Json e1 = Json::array();
    for (const Rat& v : verdict.e1) e1.push_back(rat_to_json(v));
    j["e1"] = std::move(e1);
    if (!verdict.singleton) {
        Json e2 = Json::array();
        for (const Rat& v : verdict.e2) e2.push_back(rat_to_json(v));
        j["e2"] = std::move(e2);
        Json path = Json::array();
        for (const auto& [layer, ordinal] : verdict.path)
            path.push_back(Json::array({layer, ordinal}));
        j["path"] = std::move(path);
        j["seed"] = verdict.seed;
    }
    return j;
}

Json directional_instance_to_json(const DirectionalInstance& instance) {
    auto mat = [](const RatMat& m) {
        Json rows = Json::array();
        for (int r = 0; r < m.rows; ++r) {
            Json row = Json::array();
            for (int c = 0; c < m.cols; ++c) row.push_back(rat_to_json(m.at(r, c)));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    Json j;
    j["p"] = instance.p;
    j["seed"] = instance.seed;
    j["U"] = mat(instance.U);
    j["B"] = mat(instance.B);
    j["M"] = mat(instance.M);
    j["A"] = mat(instance.A);
    Json lam = Json::array();
    for (const Rat& l : instance.lambda) lam.push_back(rat_to_json(l));
    j["lambda"] = std::move(lam);
    return j;
}

Json directional_report_to_json(const DirectionalReport& report) {
    Json j;
    j["constraints_ok"] = report.constraints_ok;
    j["derivatives_ok"] = report.derivatives_ok;
    j["trace_ok"] = report.trace_ok;
    j["gradient_ok"] = report.gradient_ok;
    j["max_derivative_err"] = report.max_derivative_err;
    j["max_gradient_err"] = report.max_gradient_err;
    j["trace"] = rat_to_json(report.trace_value);
    return j;
}

} // namespace nsad
