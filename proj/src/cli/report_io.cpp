#include "twp/cli/report_io.hpp"

#include <cstdio>

namespace twp::cli {

using json = nlohmann::ordered_json;

namespace {

json config_json(const Settings& s) {
  return json{{"step", s.flow.h},
              {"tolerance_return", s.flow.eps_ret},
              {"t_max", s.flow.t_max},
              {"tolerance", s.tolerance},
              {"quadrature_order", s.quadrature.order},
              {"panels", s.quadrature.panels},
              {"samples", s.samples},
              {"seed", s.seed}};
}

json check_json(const Check& c) {
  json j{{"name", c.name}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}};
  j["value"] = c.value ? json(*c.value) : json(nullptr);
  j["tolerance"] = c.tolerance ? json(*c.tolerance) : json(nullptr);
  return j;
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

json report_json(const Outcome& o, const std::string& manifest_path) {
  json checks = json::array();
  for (const auto& c : o.report.checks) checks.push_back(check_json(c));
  json j{{"schema", report_schema},
         {"command", o.command},
         {"manifest", manifest_path},
         {"target", o.target},
         {"verdict", to_string(o.report.overall())},
         {"config", config_json(o.settings)},
         {"checks", checks},
         {"results", o.results}};
  if (!o.manifest.empty()) j["constructed"] = o.manifest;
  return j;
}

json error_json(const std::string& command, const std::string& manifest_path, const std::string& message) {
  return json{{"schema", report_schema},
              {"command", command},
              {"manifest", manifest_path},
              {"verdict", "ERROR"},
              {"error", message}};
}

std::string summary(const Outcome& o) {
  std::string s;
  for (const auto& c : o.report.checks) {
    s += std::string(to_string(c.verdict)) + "  " + c.name;
    if (!c.detail.empty()) s += ": " + c.detail;
    if (c.value) s += " [" + number(*c.value) + (c.tolerance ? " vs " + number(*c.tolerance) : "") + "]";
    s += "\n";
  }
  s += o.command + " " + o.target + ": " + to_string(o.report.overall()) + "\n";
  return s;
}

}  // namespace twp::cli
