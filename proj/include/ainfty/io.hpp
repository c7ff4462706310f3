#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ainfty/conditions.hpp"
#include "ainfty/families.hpp"
#include "ainfty/relations.hpp"

namespace ainfty {

/// Parses an instance document: a JSON object with three sections
///   atoms:  [ {"id": <string>, "measure": "p/q"}, ... ]
///   weight: { <id>: "p/q", ... }           (one entry per atom)
///   basis:  [ {"name": <string>, "atoms": [<id>, ...]}, ... ]
/// All numbers are exact rationals rendered as "numerator/denominator"
/// strings ("p" alone is accepted on input); decimal or scientific
/// literals are rejected, never coerced. Atom order is document order.
Instance parse_instance(const std::string& text);
Instance parse_instance_file(const std::string& path);

std::string serialize_instance(const Instance& inst);

// ---- report documents ---------------------------------------------------

nlohmann::ordered_json report_to_json(const Instance& inst, const ConstantReport& report);
std::string report_to_csv(const Instance& inst, const ConstantReport& report);

nlohmann::ordered_json profile_to_json(const std::string& family, ConditionId condition,
                                       const ConditionParams& params, bool cumulative,
                                       const FamilyProfile& profile);
std::string profile_to_csv(const std::string& family, ConditionId condition,
                           const ConditionParams& params, const FamilyProfile& profile);

nlohmann::ordered_json check_table_to_json(const CheckTableReport& report);
std::string check_table_to_csv(const CheckTableReport& report);

nlohmann::ordered_json lifted_to_json(const LiftedInstance& lifted);
std::string lifted_to_csv(const LiftedInstance& lifted);

// ---- command line ---------------------------------------------------------

/// Runs one CLI invocation (args exclude the program name): subcommands
/// eval, family, check-table, lift. Returns the process exit status:
/// 0 success, 1 check-table assertion failure, 2 parse/validation/usage
/// error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ainfty
