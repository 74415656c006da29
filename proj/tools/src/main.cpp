#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli_config.hpp"
#include "cli_run.hpp"

namespace cli = caslayer::cli;

int main(int argc, char** argv) {
  CLI::App app{
      "caslayer: Casimir free energies, forces and formation works for "
      "plane-parallel multilayer stacks"};

  std::string config_path;
  app.add_option("config", config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);

  cli::CliOverrides overrides;
  std::string observable, format, output_path;
  double tolerance = 0.0;
  unsigned threads = 1;
  bool si_units = false;

  auto* obs = app.add_option("--observable", observable,
                             "Override the configured observable "
                             "(energy | force | work | identity-check)");
  app.add_option("--threads", threads,
                 "Worker threads for sweep points (default 1; values are "
                 "identical for any thread count)")
      ->check(CLI::PositiveNumber);
  auto* tol = app.add_option("--tolerance", tolerance,
                             "Override quadrature.rel_tol");
  auto* out = app.add_option("--output", output_path,
                             "Override output.path ('-' = stdout)");
  auto* fmt = app.add_option("--format", format, "Override output.format")
                  ->check(CLI::IsMember({"csv", "tsv"}));
  app.add_flag("--si-units", si_units,
               "Append a value_si column (hbar*c = 197.3269804 eV nm)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return cli::kExitValidation;
  }

  if (*obs) overrides.observable = observable;
  if (*tol) overrides.tolerance = tolerance;
  if (*out) overrides.output_path = output_path;
  if (*fmt) overrides.format = format;

  cli::RunConfig config;
  try {
    std::ifstream in(config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    config = cli::parse_config(buf.str());
    config = cli::apply_overrides(config, overrides);
  } catch (const cli::ConfigValidationError& e) {
    std::cerr << "caslayer: config error: " << e.what() << "\n";
    return cli::kExitValidation;
  }

  if (si_units && config.observable == cli::Observable::IdentityCheck) {
    std::cerr << "caslayer: config error: --si-units applies to energy, "
                 "force and work (identity residuals are dimensionless)\n";
    return cli::kExitValidation;
  }

  cli::RunOptions options;
  options.threads = threads;
  options.si_units = si_units;

  cli::RunOutcome outcome;
  try {
    outcome = cli::run(config, options);
  } catch (const cli::ConfigValidationError& e) {
    std::cerr << "caslayer: config error: " << e.what() << "\n";
    return cli::kExitValidation;
  }

  for (const cli::ResultRow& row : outcome.rows) {
    if (!row.message.empty()) {
      std::cerr << "caslayer: [" << (row.label.empty() ? "run" : row.label)
                << "] " << row.status << ": " << row.message << "\n";
    }
  }

  const std::string& path = config.output.path;
  if (path.empty() || path == "-") {
    cli::write_table(std::cout, config, options, outcome);
  } else {
    std::ofstream os(path);
    if (!os) {
      std::cerr << "caslayer: cannot open output file: " << path << "\n";
      return cli::kExitValidation;
    }
    cli::write_table(os, config, options, outcome);
  }
  return outcome.exit_code;
}
