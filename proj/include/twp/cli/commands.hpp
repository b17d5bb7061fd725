#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twp/cli/manifest.hpp"
#include "twp/cohomo/obstruction.hpp"
#include "twp/core/report.hpp"
#include "twp/dynamics/dynamics.hpp"

namespace twp::cli {

// Flag overrides; unset flags fall back to the manifest [config] section, then to defaults.
struct Options {
  std::string target;
  std::optional<double> step, tolerance_return;
  std::optional<int> quadrature_order;
  std::optional<long> seed;
};

struct Settings {
  dynamics::FlowConfig flow;
  cohomo::QuadratureConfig quadrature;
  double tolerance = 1e-6;  // integrals and lattice comparisons
  int samples = 8;          // random sample points for submersion checks
  long seed = 1;
};

Settings resolve_settings(const Manifest& m, const Options& o);

struct Outcome {
  std::string command, target;
  Settings settings;
  Report report;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::string manifest;  // constructed declarations, if any
};

// Commands: check twisted-poisson | check ncihs | check realisation | check criterion |
// check flow-pullback | periods | monodromy | obstruction | construct glue |
// construct quotient | tias convert.
const std::vector<std::string>& command_names();
Outcome run_command(const Manifest& m, const std::string& command, const Options& o = {});

// 0 without FAIL or UNDECIDED, 1 on FAIL, 2 on UNDECIDED; errors exit 3.
int exit_code(Verdict v);
constexpr int exit_error = 3;

// Library objects built from manifest declarations.
structures::TwistedPoisson build_twisted(const Manifest& m, const std::string& name);
ncihs::IntegrableSystem build_system(const Manifest& m, const std::string& name);
cohomo::Cover build_cover(const Manifest& m, const std::string& name);
cohomo::LatticeBundle build_lattice(const Manifest& m, const std::string& name);
realization::CocycleData build_cocycle(const Manifest& m, const std::string& name);
realization::Realisation build_realisation(const Manifest& m, const std::string& name);

// Standalone declarations (charts, twisted bases, pieces, fibre maps) of a realisation.
Manifest realisation_manifest(const realization::Realisation& r, const std::string& name);

}  // namespace twp::cli
