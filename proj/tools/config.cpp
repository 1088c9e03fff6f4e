#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qaept::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValues KeyValues::parse_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_string(ss.str());
}

KeyValues KeyValues::parse_string(const std::string& text) {
  KeyValues kv;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": empty key or value");
    if (kv.values_.count(key))
      throw ValidationError("config: duplicate key '" + key + "'");
    kv.values_[key] = value;
  }
  return kv;
}

bool KeyValues::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValues::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw ValidationError("config: missing required key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

std::string KeyValues::get_string(const std::string& key,
                                  const std::string& fallback) const {
  if (!has(key)) return fallback;
  return get_string(key);
}

double KeyValues::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: key '" + key + "' is not a number: " + s);
  }
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return get_double(key);
}

int KeyValues::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ValidationError("config: key '" + key + "' must be an integer");
  return i;
}

int KeyValues::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  return get_int(key);
}

std::vector<double> KeyValues::get_double_list(
    const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  std::vector<double> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("config: key '" + key + "' has a bad entry: " + item);
    }
  }
  if (out.empty())
    throw ValidationError("config: key '" + key + "' lists no values");
  return out;
}

void KeyValues::check_all_consumed() const {
  for (const auto& [key, value] : values_)
    if (!consumed_.count(key))
      throw ValidationError("config: unknown key '" + key + "'");
}

RunConfig load_config(const std::filesystem::path& path) {
  const KeyValues kv = KeyValues::parse_file(path);
  RunConfig cfg;

  cfg.system.kind = kv.get_string("system.kind");
  const std::set<std::string> kinds{"free",    "harmonic",   "caldirola_kanai",
                                    "hermite", "lane_emden", "custom"};
  if (!kinds.count(cfg.system.kind))
    throw ValidationError("config: unknown system.kind '" + cfg.system.kind + "'");

  cfg.system.mass = kv.get_double("system.mass", 1.0);
  if (cfg.system.mass <= 0.0)
    throw ValidationError("config: system.mass must be positive");
  if (cfg.system.kind == "harmonic") {
    cfg.system.omega = kv.get_double("system.omega");
  } else if (cfg.system.kind == "caldirola_kanai") {
    cfg.system.gamma = kv.get_double("system.gamma");
    cfg.system.omega = kv.get_double("system.omega");
    if (cfg.system.gamma < 0.0)
      throw ValidationError("config: system.gamma must be >= 0");
  } else if (cfg.system.kind == "hermite") {
    cfg.system.alpha = kv.get_double("system.alpha");
    cfg.system.omega = kv.get_double("system.omega");
    if (cfg.system.alpha <= 0.0)
      throw ValidationError("config: system.alpha must be > 0");
  } else if (cfg.system.kind == "lane_emden") {
    cfg.system.mu = kv.get_double("system.mu");
    cfg.system.nu = kv.get_double("system.nu");
    cfg.system.omega = kv.get_double("system.omega");
    if (cfg.system.nu <= 0.0)
      throw ValidationError("config: system.nu must be > 0");
  } else if (cfg.system.kind == "custom") {
    cfg.system.table = kv.get_string("system.table");
  }

  cfg.grid.x_min = kv.get_double("grid.x_min", -12.0);
  cfg.grid.x_max = kv.get_double("grid.x_max", 12.0);
  cfg.grid.n = kv.get_int("grid.n", 512);
  if (!(cfg.grid.x_min < cfg.grid.x_max))
    throw ValidationError("config: grid.x_min must be < grid.x_max");
  if (cfg.grid.n < 16) throw ValidationError("config: grid.n must be >= 16");

  cfg.hbar = kv.get_double("constants.hbar", 1.0);
  cfg.m = kv.get_double("constants.m", 1.0);
  if (cfg.hbar <= 0.0 || cfg.m <= 0.0)
    throw ValidationError("config: constants must be positive");

  cfg.time.t_final = kv.get_double("time.t_final", 5.0);
  cfg.time.dt = kv.get_double("time.dt", 1e-3);
  cfg.time.store_every = kv.get_int("time.store_every", 100);
  if (cfg.time.dt <= 0.0) throw ValidationError("config: time.dt must be > 0");
  if (cfg.time.t_final <= 0.0)
    throw ValidationError("config: time.t_final must be > 0");
  if (cfg.time.store_every < 1)
    throw ValidationError("config: time.store_every must be >= 1");

  cfg.invariant.kind = kv.get_string("invariant.kind", "dodonov_manko");
  const std::set<std::string> inv_kinds{"lewis", "dodonov_manko", "gdm", "custom"};
  if (!inv_kinds.count(cfg.invariant.kind))
    throw ValidationError("config: unknown invariant.kind '" +
                          cfg.invariant.kind + "'");
  if (cfg.invariant.kind == "custom") {
    cfg.invariant.omega_tilde = kv.get_double("invariant.omega_tilde");
    cfg.invariant.gamma_tilde = kv.get_double("invariant.gamma_tilde");
  }

  cfg.outputs.dir = kv.get_string("outputs.dir", "out");
  cfg.outputs.format = kv.get_string("outputs.format", "csv");
  const std::set<std::string> formats{"csv", "json", "bin"};
  if (!formats.count(cfg.outputs.format))
    throw ValidationError("config: outputs.format must be csv, json or bin");

  cfg.n_max = kv.get_int("eigenstates.n_max", 4);
  if (cfg.n_max < 0) throw ValidationError("config: eigenstates.n_max must be >= 0");
  cfg.times = kv.get_double_list("eigenstates.times", {0.0});
  for (double t : cfg.times)
    if (t < 0.0 || t > cfg.time.t_final)
      throw ValidationError("config: eigenstates.times must lie in [0, t_final]");

  cfg.initial = kv.get_string("propagate.initial", "eigenstate:0");
  cfg.boundary_tol = kv.get_double("propagate.boundary_tol", 1e-6);
  if (cfg.boundary_tol <= 0.0)
    throw ValidationError("config: propagate.boundary_tol must be > 0");

  kv.check_all_consumed();
  return cfg;
}

}  // namespace qaept::cli
