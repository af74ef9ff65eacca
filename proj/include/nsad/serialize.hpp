#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "nsad/audit.hpp"
#include "nsad/enumerate.hpp"
#include "nsad/hardness.hpp"
#include "nsad/program.hpp"
#include "nsad/relu_net.hpp"

namespace nsad {

// Insertion-ordered so that serialize -> parse -> serialize is byte-identical.
using Json = nlohmann::ordered_json;

// Integers small enough for JSON numbers stay numbers; everything else becomes
// the exact string "n/d".
Json rat_to_json(const Rat& r);
Rat rat_from_json(const Json& j);

std::string dump_json(const Json& j); // canonical: compact + trailing newline

// --- programs ------------------------------------------------------------------
// {"p": int, "q": int, "nodes": [{"op": name, "args": [...], "const"?, "sub"?}]}
// Nested nodes use {"op": "call", "sub": "<name>"}; a sidecar file maps the
// names to files on disk.

using SubprogramMap = std::map<std::string, std::shared_ptr<const Program>>;

Json program_to_json(const Program& program);
Program program_from_json(const Json& j, const SubprogramMap& subs = {});

void save_program(const std::filesystem::path& path, const Program& program);
Program load_program(const std::filesystem::path& path);

// --- networks --------------------------------------------------------------------
// {"L": int, "mats": [[[entry]]], "masks": [[0|1]]}

Json net_to_json(const ReluNetwork& net);
ReluNetwork net_from_json(const Json& j);
void save_net(const std::filesystem::path& path, const ReluNetwork& net);
ReluNetwork load_net(const std::filesystem::path& path);

// --- reports ---------------------------------------------------------------------

Json cost_report_to_json(const CostReport& report);
Json op_table_to_json(const std::vector<OpTableRow>& rows);
Json verdict_to_json(const EnumVerdict& verdict);
Json directional_instance_to_json(const DirectionalInstance& instance);
Json directional_report_to_json(const DirectionalReport& report);

} // namespace nsad
