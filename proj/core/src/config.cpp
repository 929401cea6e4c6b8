#include "pfw/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pfw/errors.hpp"

namespace pfw {

namespace {

struct Entry {
  std::string value;
  int line = 0;  // 0 for preset defaults
};

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scene", {"name", "radius", "minor_radius", "gap", "shift"}},
      {"grid", {"dims", "modes"}},
      {"model", {"flow", "eps", "alpha", "dt", "sigma", "tol", "max_iter", "C", "beta", "alpha_exp", "eta_grad"}},
      {"run", {"T", "snapshot_every", "record_every", "out", "seed", "energies"}},
  };
  return keys;
}

using Preset = std::map<std::string, std::string>;

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> table = {
      {"auto_fig2",
       {{"scene.name", "circle"}, {"grid.dims", "2"}, {"grid.modes", "64"}, {"model.flow", "classical"},
        {"model.eps", "2/P"}, {"model.dt", "auto_fig2"}, {"run.T", "4e-4"}, {"run.record_every", "20"}}},
      {"auto_fig2_eps3",
       {{"scene.name", "circle"}, {"grid.dims", "2"}, {"grid.modes", "64"}, {"model.flow", "classical"},
        {"model.eps", "3/P"}, {"model.dt", "auto_fig2"}, {"run.T", "4e-4"}, {"run.record_every", "20"}}},
      {"auto_fig11",
       {{"scene.name", "circle"}, {"grid.dims", "2"}, {"grid.modes", "64"}, {"model.flow", "mugnai"},
        {"model.eps", "2/P"}, {"model.dt", "auto_fig2"}, {"run.T", "4e-4"}, {"run.record_every", "20"}}},
      {"auto_fig3_eps5",
       {{"scene.name", "two_tangent_circles"}, {"scene.shift", "0"}, {"grid.dims", "2"},
        {"grid.modes", "64"}, {"model.flow", "classical"}, {"model.eps", "5/P"}, {"model.dt", "auto_fig3"},
        {"run.T", "8e-4"}, {"run.record_every", "100"}}},
      {"auto_fig3_eps1.5",
       {{"scene.name", "two_tangent_circles"}, {"scene.shift", "0"}, {"grid.dims", "2"},
        {"grid.modes", "64"}, {"model.flow", "classical"}, {"model.eps", "1.5/P"}, {"model.dt", "auto_fig3"},
        {"run.T", "8e-4"}, {"run.record_every", "100"}}},
      {"auto_fig13",
       {{"scene.name", "two_circles"}, {"scene.gap", "3*eps"}, {"scene.shift", "half_cell"},
        {"grid.dims", "2"}, {"grid.modes", "64"}, {"model.flow", "mugnai"}, {"model.eps", "2/P"},
        {"model.dt", "auto_fig13"}, {"run.T", "8e-4"}, {"run.record_every", "200"}}},
      {"auto_fig4",
       {{"scene.name", "cross"}, {"scene.shift", "half_cell"}, {"grid.dims", "2"}, {"grid.modes", "64"},
        {"model.flow", "allen_cahn"}, {"model.eps", "2/P"}, {"model.dt", "0.05*eps"}, {"run.T", "40*eps"},
        {"run.record_every", "50"}}},
      {"auto_fig9",
       {{"scene.name", "torus"}, {"grid.dims", "3"}, {"grid.modes", "32"}, {"model.flow", "classical"},
        {"model.eps", "2/P"}, {"model.dt", "auto_3d"}, {"run.T", "2e-3"}, {"run.record_every", "200"}}},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  if (line > 0) throw ValidationError("config line " + std::to_string(line) + ": " + msg);
  throw ValidationError("config: " + msg);
}

bool parse_plain(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

// number | number/P | number*eps
double parse_value(const std::string& key, const Entry& e, double P, double eps) {
  const std::string v = e.value;
  double x = 0.0;
  if (parse_plain(v, x)) return x;
  auto slash = v.rfind("/P");
  if (slash != std::string::npos && slash + 2 == v.size() && parse_plain(trim(v.substr(0, slash)), x)) {
    if (!(P > 0)) fail(e.line, "'" + key + "' uses P before the grid is known");
    return x / P;
  }
  auto star = v.rfind("*eps");
  if (star != std::string::npos && star + 4 == v.size() && parse_plain(trim(v.substr(0, star)), x)) {
    if (!(eps > 0)) fail(e.line, "'" + key + "' uses eps before eps is known");
    return x * eps;
  }
  fail(e.line, "invalid value '" + v + "' for '" + key + "'");
}

long parse_long(const std::string& key, const Entry& e) {
  long x = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) fail(e.line, "invalid integer '" + e.value + "' for '" + key + "'");
  return x;
}

}  // namespace

std::vector<std::string> config_presets() {
  std::vector<std::string> names;
  for (const auto& [k, v] : presets()) names.push_back(k);
  return names;
}

long RunConfig::steps() const {
  if (!(model.dt > 0.0)) return 0;
  return static_cast<long>(std::ceil(T / model.dt - 1e-9));
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Entry> values;
  std::string preset;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!allowed_keys().count(section)) fail(lineno, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    if (value.empty()) fail(lineno, "empty value for '" + key + "'");
    if (section.empty()) {
      if (key != "preset") fail(lineno, "unknown key '" + key + "' outside any section");
      if (!presets().count(value)) fail(lineno, "unknown preset '" + value + "'");
      preset = value;
      continue;
    }
    if (!allowed_keys().at(section).count(key)) fail(lineno, "unknown key '" + key + "' in [" + section + "]");
    const std::string full = section + "." + key;
    if (values.count(full) && values[full].line > 0) fail(lineno, "duplicate key '" + key + "'");
    values[full] = {value, lineno};
  }
  if (!preset.empty())
    for (const auto& [k, v] : presets().at(preset))
      if (!values.count(k)) values[k] = {v, 0};

  auto has = [&](const std::string& k) { return values.count(k) > 0; };
  auto get = [&](const std::string& k) -> const Entry& { return values.at(k); };

  RunConfig cfg;
  if (has("grid.dims")) cfg.dims = static_cast<int>(parse_long("dims", get("grid.dims")));
  if (has("grid.modes")) cfg.modes = static_cast<int>(parse_long("modes", get("grid.modes")));
  PeriodicGrid grid;
  try {
    grid = make_grid(cfg.dims, cfg.modes);
  } catch (const ValidationError& e) {
    fail(has("grid.modes") ? get("grid.modes").line : 0, e.what());
  }
  const double P = cfg.modes;

  if (has("model.flow")) {
    try {
      cfg.model.kind = parse_flow_kind(get("model.flow").value);
    } catch (const ValidationError& e) {
      fail(get("model.flow").line, e.what());
    }
  }
  if (!has("model.eps")) fail(0, "missing required key 'eps' in [model]");
  cfg.model.eps = parse_value("eps", get("model.eps"), P, 0.0);
  const double eps = cfg.model.eps;
  if (!(eps > 0.0)) fail(get("model.eps").line, "eps must be positive");
  if (!(eps >= 2.0 * grid.spacing())) fail(get("model.eps").line, "eps must be at least 2 dx");

  if (!has("model.dt")) fail(0, "missing required key 'dt' in [model]");
  {
    const Entry& e = get("model.dt");
    if (e.value == "auto_fig2") cfg.model.dt = eps * eps / (2.0 * P * P);
    else if (e.value == "auto_fig3") cfg.model.dt = std::pow(P, -4.0);
    else if (e.value == "auto_fig13") cfg.model.dt = eps * eps / (8.0 * P * P);
    else if (e.value == "auto_3d") cfg.model.dt = eps * eps / (10.0 * P * P);
    else cfg.model.dt = parse_value("dt", e, P, eps);
    if (!(cfg.model.dt > 0.0)) fail(e.line, "dt must be positive");
  }
  auto num = [&](const std::string& k, const char* name, double& dst) {
    if (has(k)) dst = parse_value(name, get(k), P, eps);
  };
  num("model.alpha", "alpha", cfg.model.alpha);
  num("model.sigma", "sigma", cfg.model.sigma);
  num("model.tol", "tol", cfg.model.tol);
  num("model.C", "C", cfg.heuristic_C);
  num("model.beta", "beta", cfg.energy.beta);
  num("model.alpha_exp", "alpha_exp", cfg.energy.alpha_exp);
  num("model.eta_grad", "eta_grad", cfg.energy.reg.eta_grad);
  if (has("model.max_iter")) cfg.model.max_iter = static_cast<int>(parse_long("max_iter", get("model.max_iter")));
  cfg.energy.reg.sigma = cfg.model.sigma;

  if (!(cfg.model.alpha > 0.0)) fail(has("model.alpha") ? get("model.alpha").line : 0, "alpha must be positive");
  if (!(cfg.model.sigma > 0.0 && cfg.model.sigma < 1.0))
    fail(has("model.sigma") ? get("model.sigma").line : 0, "sigma must lie in (0, 1)");
  if (!(cfg.model.tol > 0.0 && cfg.model.tol <= 1e-4))
    fail(has("model.tol") ? get("model.tol").line : 0, "tol must lie in (0, 1e-4]");
  if (cfg.model.max_iter < 1) fail(get("model.max_iter").line, "max_iter must be >= 1");
  if (!(cfg.heuristic_C > 0.0)) fail(get("model.C").line, "C must be positive");
  if (!(cfg.energy.beta >= 0.0)) fail(get("model.beta").line, "beta must be >= 0");
  if (!(cfg.energy.reg.eta_grad > 0.0 && cfg.energy.reg.eta_grad < 1.0))
    fail(get("model.eta_grad").line, "eta_grad must lie in (0, 1)");

  if (has("scene.name")) cfg.scene = get("scene.name").value;
  cfg.scene_params.dims = cfg.dims;
  cfg.scene_params.eps = eps;
  num("scene.radius", "radius", cfg.scene_params.radius);
  num("scene.minor_radius", "minor_radius", cfg.scene_params.minor_radius);
  num("scene.gap", "gap", cfg.scene_params.gap);
  if (has("scene.shift")) {
    const Entry& e = get("scene.shift");
    cfg.scene_params.shift = e.value == "half_cell" ? 0.5 * grid.spacing() : parse_value("shift", e, P, eps);
  }
  if (has("scene.radius") && !(cfg.scene_params.radius > 0.0)) fail(get("scene.radius").line, "radius must be positive");
  if (has("scene.gap") && !(cfg.scene_params.gap >= 0.0)) fail(get("scene.gap").line, "gap must be >= 0");
  try {
    (void)builtin_scene(cfg.scene, cfg.scene_params);
  } catch (const ValidationError& e) {
    fail(has("scene.name") ? get("scene.name").line : 0, e.what());
  }

  if (!has("run.T")) fail(0, "missing required key 'T' in [run]");
  cfg.T = parse_value("T", get("run.T"), P, eps);
  if (!(cfg.T >= 0.0)) fail(get("run.T").line, "T must be >= 0");
  if (cfg.T / cfg.model.dt > 1e8) fail(get("run.T").line, "T/dt exceeds the 1e8 step guard");
  if (has("run.snapshot_every")) cfg.snapshot_every = parse_long("snapshot_every", get("run.snapshot_every"));
  if (has("run.record_every")) cfg.record_every = parse_long("record_every", get("run.record_every"));
  if (cfg.snapshot_every < 0) fail(get("run.snapshot_every").line, "snapshot_every must be >= 0");
  if (cfg.record_every < 0) fail(get("run.record_every").line, "record_every must be >= 0");
  if (has("run.out")) cfg.out_dir = get("run.out").value;
  if (has("run.seed")) cfg.seed = static_cast<std::uint64_t>(parse_long("seed", get("run.seed")));
  if (has("run.energies")) {
    const Entry& e = get("run.energies");
    cfg.energies = {false, false, false};
    std::istringstream list(e.value);
    std::string item;
    while (std::getline(list, item, ',')) {
      item = trim(item);
      if (item == "perimeter") cfg.energies.perimeter = true;
      else if (item == "classical") cfg.energies.classical = true;
      else if (item == "mugnai") cfg.energies.mugnai = true;
      else fail(e.line, "unknown energy '" + item + "'");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pfw
