#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"
#include "qaept/errors.hpp"

namespace {

// Exit-code contract: 0 pass, 1 property failure (verify), 2 validation,
// 3 numeric failure, 4 spectrum regime, 5 grid.
int dispatch(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const qaept::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const qaept::SpectrumError& e) {
    std::cerr << "spectrum regime error: " << e.what() << "\n";
    return 4;
  } catch (const qaept::GridError& e) {
    std::cerr << "grid error: " << e.what() << "\n";
    return 5;
  } catch (const qaept::Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qaept: classical and quantum Arnold-Ermakov-Pinney transformations, "
      "quadratic invariants and eigenstates of damped/time-dependent "
      "oscillators, verified against a Crank-Nicolson propagator"};
  app.require_subcommand(1);

  std::string config_path, out_override, format_override;
  std::string map_input, map_direction = "inverse";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration file")->required();
    cmd->add_option("--out", out_override, "output directory (overrides config)");
    cmd->add_option("--format", format_override,
                    "state output format: csv|json|bin (overrides config)");
  };

  auto* classical = app.add_subcommand(
      "classical", "integrate the canonical basis and the Ermakov function");
  add_common(classical);
  auto* eigenstates = app.add_subcommand(
      "eigenstates", "invariant eigenstates and the grid spectrum");
  add_common(eigenstates);
  auto* map_cmd = app.add_subcommand(
      "map", "apply the transformation to a stored state");
  add_common(map_cmd);
  map_cmd->add_option("--in", map_input, "input state (binary dump)")->required();
  map_cmd->add_option("--direction", map_direction, "forward|inverse");
  auto* invariant = app.add_subcommand(
      "invariant", "build the invariant matrix, residuals and spectra");
  add_common(invariant);
  auto* propagate = app.add_subcommand(
      "propagate", "Crank-Nicolson propagation with trajectory export");
  add_common(propagate);
  auto* verify = app.add_subcommand(
      "verify", "run the property suite and emit a pass/fail report");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  return dispatch([&]() -> int {
    auto cfg = qaept::cli::load_config(config_path);
    if (!out_override.empty()) cfg.outputs.dir = out_override;
    if (!format_override.empty()) {
      if (format_override != "csv" && format_override != "json" &&
          format_override != "bin")
        throw qaept::ValidationError("--format must be csv, json or bin");
      cfg.outputs.format = format_override;
    }

    if (classical->parsed()) return qaept::cli::cmd_classical(cfg);
    if (eigenstates->parsed()) return qaept::cli::cmd_eigenstates(cfg);
    if (map_cmd->parsed())
      return qaept::cli::cmd_map(cfg, map_input, map_direction);
    if (invariant->parsed()) return qaept::cli::cmd_invariant(cfg);
    if (propagate->parsed()) return qaept::cli::cmd_propagate(cfg);
    return qaept::cli::cmd_verify(cfg);
  });
}
