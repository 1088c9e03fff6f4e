#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qaept/errors.hpp"

namespace qaept::cli {

/// Flat key-value config with dotted sections, e.g.
///   system.kind = caldirola_kanai
///   system.gamma = 0.4
/// Lines starting with '#' are comments. Every key must be consumed by the
/// command that runs; unknown keys are rejected to catch typos.
class KeyValues {
 public:
  static KeyValues parse_file(const std::filesystem::path& path);
  static KeyValues parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

  /// Throws ValidationError naming any key never read by a getter.
  void check_all_consumed() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
};

struct GridConfig {
  double x_min = -12.0, x_max = 12.0;
  int n = 512;
};

struct TimeConfig {
  double t_final = 5.0;
  double dt = 1e-3;
  int store_every = 100;
};

struct SystemConfig {
  std::string kind = "caldirola_kanai";
  double gamma = 0.4, omega = 1.0, alpha = 0.25, mu = 0.3, nu = 0.2;
  double mass = 1.0;
  std::string table;  // custom systems: CSV path with t, fdot, omega_sq, lambda
};

struct InvariantConfig {
  std::string kind = "dodonov_manko";  // lewis | dodonov_manko | gdm | custom
  double omega_tilde = 1.0, gamma_tilde = 0.0;
};

struct OutputConfig {
  std::string dir = "out";
  std::string format = "csv";  // csv | json | bin
};

struct RunConfig {
  SystemConfig system;
  GridConfig grid;
  double hbar = 1.0, m = 1.0;
  TimeConfig time;
  InvariantConfig invariant;
  OutputConfig outputs;
  int n_max = 4;
  std::vector<double> times{0.0};   // eigenstate / invariant evaluation times
  std::string initial = "eigenstate:0";
  double boundary_tol = 1e-6;
};

/// Parses and fully validates a run configuration; throws ValidationError
/// before any output is produced.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace qaept::cli
