#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "twp/cli/commands.hpp"
#include "twp/cli/manifest.hpp"
#include "twp/cli/report_io.hpp"

namespace {

struct Invocation {
  std::string command;
  std::string manifest_path, report_path, output_path;
  twp::cli::Options options;
};

void add_common(CLI::App* sub, Invocation& inv, const std::string& command) {
  sub->add_option("manifest", inv.manifest_path, "Manifest file")->required()->check(CLI::ExistingFile);
  sub->add_option("--target", inv.options.target, "Section to act on (default: the only one of its kind)");
  sub->add_option("--report", inv.report_path, "Write the full JSON report to this path");
  sub->add_option("--output", inv.output_path, "Write constructed declarations to this path");
  sub->add_option("--step", inv.options.step, "RK4 step h (default 1e-3)");
  sub->add_option("--tolerance-return", inv.options.tolerance_return, "Return tolerance on the torus (default 1e-6)");
  sub->add_option("--quadrature-order", inv.options.quadrature_order,
                  "Gauss-Legendre points per panel and axis (default 8)");
  sub->add_option("--seed", inv.options.seed, "Seed for random sample points and tangent pairs (default 1)");
  sub->callback([&inv, command] { inv.command = command; });
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw twp::ValidationError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw twp::ValidationError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification and computation tools for twisted Poisson structures and their realisations"};
  app.require_subcommand(1);
  Invocation inv;

  auto* check = app.add_subcommand("check", "Verify a declaration")->require_subcommand(1);
  add_common(check->add_subcommand("twisted-poisson", "Twisted Jacobi identity in both forms"), inv, "check twisted-poisson");
  add_common(check->add_subcommand("ncihs", "NC1-NC5 and the induced base structure"), inv, "check ncihs");
  add_common(check->add_subcommand("realisation", "IR1-IR4 and transition compatibility"), inv, "check realisation");
  add_common(check->add_subcommand("criterion", "Existence criterion for a Chern class"), inv, "check criterion");
  add_common(check->add_subcommand("flow-pullback", "Flow pullback identity, numeric and symbolic"), inv,
             "check flow-pullback");
  add_common(app.add_subcommand("periods", "Period lattices at points"), inv, "periods");
  add_common(app.add_subcommand("monodromy", "Monodromy matrix along a loop"), inv, "monodromy");
  add_common(app.add_subcommand("obstruction", "Cell integral of a closed 3-form"), inv, "obstruction");
  auto* construct = app.add_subcommand("construct", "Build a realisation")->require_subcommand(1);
  add_common(construct->add_subcommand("glue", "Glue local models along cocycle data"), inv, "construct glue");
  add_common(construct->add_subcommand("quotient", "Quotient of the conormal model by a lattice"), inv,
             "construct quotient");
  auto* tias = app.add_subcommand("tias", "Transversally integral affine structures")->require_subcommand(1);
  add_common(tias->add_subcommand("convert", "Atlas to lattice, or lattice with primitives to atlas"), inv,
             "tias convert");
  add_common(app.add_subcommand("format", "Print the manifest in canonical form"), inv, "format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : twp::cli::exit_error;
  }

  try {
    const twp::cli::Manifest m = twp::cli::parse_manifest(read_file(inv.manifest_path));
    if (inv.command == "format") {
      std::cout << twp::cli::serialize(m);
      return 0;
    }
    const twp::cli::Outcome o = twp::cli::run_command(m, inv.command, inv.options);
    std::cout << twp::cli::summary(o);
    if (!o.manifest.empty()) {
      if (inv.output_path.empty())
        std::cout << "\n" << o.manifest;
      else
        write_file(inv.output_path, o.manifest);
    }
    if (!inv.report_path.empty()) write_file(inv.report_path, twp::cli::report_json(o, inv.manifest_path).dump(2) + "\n");
    return twp::cli::exit_code(o.report.overall());
  } catch (const twp::cli::ManifestError& e) {
    for (const auto& err : e.errors())
      std::cerr << inv.manifest_path << ":" << err.line << ":" << err.column << ": " << err.message << "\n";
    if (!inv.report_path.empty())
      write_file(inv.report_path, twp::cli::error_json(inv.command, inv.manifest_path, e.what()).dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!inv.report_path.empty())
      write_file(inv.report_path, twp::cli::error_json(inv.command, inv.manifest_path, e.what()).dump(2) + "\n");
  }
  return twp::cli::exit_error;
}
