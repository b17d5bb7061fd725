#pragma once

#include <string>

#include "json.hpp"
#include "twp/cli/commands.hpp"

namespace twp::cli {

inline constexpr const char* report_schema = "twp-report/1";

// Full machine-readable report with a fixed key order.
nlohmann::ordered_json report_json(const Outcome& o, const std::string& manifest_path);
// Report for a command that raised an error before producing checks.
nlohmann::ordered_json error_json(const std::string& command, const std::string& manifest_path, const std::string& message);
// One line per check plus the overall verdict.
std::string summary(const Outcome& o);

}  // namespace twp::cli
