#include "spdelab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spdelab/rng.hpp"

namespace spdelab {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

//! Strip a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

double parse_number(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + s + "'");
  }
  if (used != s.size()) fail(line, "trailing characters after number in '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s, int line) {
  const double v = parse_number(s, line);
  const double r = std::nearbyint(v);
  if (std::abs(v - r) > 1e-9) fail(line, "expected an integer, got '" + s + "'");
  return (long long)(r);
}

std::string parse_string(const std::string& s, int line) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"')
    fail(line, "expected a quoted string, got '" + s + "'");
  return s.substr(1, s.size() - 2);
}

std::vector<double> parse_array(const std::string& s, int line) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    fail(line, "expected an array, got '" + s + "'");
  std::vector<double> out;
  std::string body = s.substr(1, s.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, "empty array element");
    out.push_back(parse_number(item, line));
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v[i]);
  }
  return s + "]";
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "operator" && section != "measure" && section != "grid" &&
          section != "coefficients" && section != "initial" &&
          section != "observe" && section != "run")
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty()) fail(line, "expected 'key = value'");
    if (section.empty()) fail(line, "key outside any section");

    if (section == "operator") {
      if (key == "kind") {
        cfg.operator_kind = parse_string(val, line);
      } else if (key == "dim") {
        cfg.dim = int(parse_integer(val, line));
      } else {
        fail(line, "unknown key '" + key + "' in [operator]");
      }
    } else if (section == "measure") {
      if (key == "kind") cfg.measure_kind = parse_string(val, line);
      else if (key == "beta") cfg.beta = parse_number(val, line);
      else if (key == "length_scale") cfg.length_scale = parse_number(val, line);
      else if (key == "atom_points") cfg.atom_points = parse_array(val, line);
      else if (key == "atom_masses") cfg.atom_masses = parse_array(val, line);
      else fail(line, "unknown key '" + key + "' in [measure]");
    } else if (section == "grid") {
      if (key == "length") cfg.length = parse_number(val, line);
      else if (key == "modes") cfg.modes = int(parse_integer(val, line));
      else if (key == "steps") cfg.steps = int(parse_integer(val, line));
      else fail(line, "unknown key '" + key + "' in [grid]");
    } else if (section == "coefficients") {
      if (key == "sigma_kind") cfg.sigma_kind = parse_string(val, line);
      else if (key == "sigma_params") cfg.sigma_params = parse_array(val, line);
      else if (key == "b_kind") cfg.b_kind = parse_string(val, line);
      else if (key == "b_params") cfg.b_params = parse_array(val, line);
      else fail(line, "unknown key '" + key + "' in [coefficients]");
    } else if (section == "initial") {
      if (key == "u0_kind") cfg.u0_kind = parse_string(val, line);
      else if (key == "u0_params") cfg.u0_params = parse_array(val, line);
      else if (key == "v0_kind") cfg.v0_kind = parse_string(val, line);
      else if (key == "v0_params") cfg.v0_params = parse_array(val, line);
      else fail(line, "unknown key '" + key + "' in [initial]");
    } else if (section == "observe") {
      if (key == "t") cfg.observe_t = parse_number(val, line);
      else if (key == "x") cfg.observe_x = parse_array(val, line);
      else fail(line, "unknown key '" + key + "' in [observe]");
    } else {  // run
      if (key == "samples") {
        const long long v = parse_integer(val, line);
        if (v < 1) fail(line, "samples must be positive");
        cfg.samples = std::size_t(v);
      } else if (key == "seed") {
        const long long v = parse_integer(val, line);
        if (v < 0) fail(line, "seed must be non-negative");
        cfg.seed = std::uint64_t(v);
      } else if (key == "threads") {
        const long long v = parse_integer(val, line);
        if (v < 1) fail(line, "threads must be positive");
        cfg.threads = int(v);
      } else {
        fail(line, "unknown key '" + key + "' in [run]");
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_text(const ExperimentConfig& cfg) {
  std::string s;
  s += "[operator]\n";
  s += "kind = \"" + cfg.operator_kind + "\"\n";
  s += "dim = " + std::to_string(cfg.dim) + "\n\n";

  s += "[measure]\n";
  s += "kind = \"" + cfg.measure_kind + "\"\n";
  if (cfg.measure_kind == "riesz") s += "beta = " + fmt(cfg.beta) + "\n";
  if (cfg.measure_kind == "exponential")
    s += "length_scale = " + fmt(cfg.length_scale) + "\n";
  if (cfg.measure_kind == "atoms") {
    s += "atom_points = " + fmt(cfg.atom_points) + "\n";
    s += "atom_masses = " + fmt(cfg.atom_masses) + "\n";
  }
  s += "\n[grid]\n";
  s += "length = " + fmt(cfg.length) + "\n";
  s += "modes = " + std::to_string(cfg.modes) + "\n";
  s += "steps = " + std::to_string(cfg.steps) + "\n";

  s += "\n[coefficients]\n";
  s += "sigma_kind = \"" + cfg.sigma_kind + "\"\n";
  s += "sigma_params = " + fmt(cfg.sigma_params) + "\n";
  s += "b_kind = \"" + cfg.b_kind + "\"\n";
  s += "b_params = " + fmt(cfg.b_params) + "\n";

  s += "\n[initial]\n";
  s += "u0_kind = \"" + cfg.u0_kind + "\"\n";
  s += "u0_params = " + fmt(cfg.u0_params) + "\n";
  s += "v0_kind = \"" + cfg.v0_kind + "\"\n";
  s += "v0_params = " + fmt(cfg.v0_params) + "\n";

  s += "\n[observe]\n";
  s += "t = " + fmt(cfg.observe_t) + "\n";
  s += "x = " + fmt(cfg.observe_x) + "\n";
  return s;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_text(cfg);
  return fnv1a64(text.data(), text.size());
}

SpectralMeasure make_measure(const ExperimentConfig& cfg) {
  if (cfg.measure_kind == "white") return SpectralMeasure::white(cfg.dim);
  if (cfg.measure_kind == "riesz")
    return SpectralMeasure::riesz(cfg.beta, cfg.dim);
  if (cfg.measure_kind == "exponential")
    return SpectralMeasure::exponential(cfg.length_scale, cfg.dim);
  if (cfg.measure_kind == "atoms") {
    const std::size_t n = cfg.atom_masses.size();
    if (cfg.atom_points.size() != n * std::size_t(cfg.dim))
      throw std::runtime_error(
          "config: atom_points must hold dim coordinates per mass");
    std::vector<Atom> atoms(n);
    for (std::size_t i = 0; i < n; ++i) {
      atoms[i].point.assign(cfg.atom_points.begin() + i * cfg.dim,
                            cfg.atom_points.begin() + (i + 1) * cfg.dim);
      atoms[i].mass = cfg.atom_masses[i];
    }
    return SpectralMeasure::atoms(atoms, cfg.dim);
  }
  throw std::runtime_error("config: unknown measure kind '" + cfg.measure_kind +
                           "'");
}

FundamentalSolution make_solution(const ExperimentConfig& cfg) {
  using Kind = FundamentalSolution::Kind;
  if (cfg.operator_kind == "heat")
    return FundamentalSolution(Kind::heat, cfg.dim);
  if (cfg.operator_kind == "wave")
    return FundamentalSolution(Kind::wave, cfg.dim);
  if (cfg.operator_kind == "damped_wave")
    return FundamentalSolution(Kind::damped_wave, cfg.dim);
  throw std::runtime_error("config: unknown operator kind '" +
                           cfg.operator_kind + "'");
}

Coefficient make_coefficient(const std::string& kind,
                             const std::vector<double>& params) {
  const auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw std::runtime_error("config: coefficient kind '" + kind +
                               "' needs " + std::to_string(n) + " parameters");
  };
  if (kind == "constant") {
    need(1);
    return Coefficient::constant(params[0]);
  }
  if (kind == "sine") {
    need(3);
    return Coefficient::sine(params[0], params[1], params[2]);
  }
  if (kind == "clamped_affine") {
    need(3);
    return Coefficient::clamped_affine(params[0], params[1], params[2]);
  }
  throw std::runtime_error("config: unknown coefficient kind '" + kind + "'");
}

CoefficientPair make_coefficients(const ExperimentConfig& cfg) {
  CoefficientPair pair;
  pair.sigma = make_coefficient(cfg.sigma_kind, cfg.sigma_params);
  pair.b = make_coefficient(cfg.b_kind, cfg.b_params);
  return pair;
}

namespace {

InitialProfile make_profile(const std::string& kind,
                            const std::vector<double>& params) {
  const auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw std::runtime_error("config: initial kind '" + kind + "' needs " +
                               std::to_string(n) + " parameters");
  };
  if (kind == "zero") {
    need(0);
    return InitialProfile::zero();
  }
  if (kind == "constant") {
    need(1);
    return InitialProfile::constant(params[0]);
  }
  if (kind == "mode") {
    need(2);
    const double k = params[0];
    if (std::abs(k - std::nearbyint(k)) > 1e-9)
      throw std::runtime_error("config: mode number must be an integer");
    return InitialProfile::mode(int(std::nearbyint(k)), params[1]);
  }
  if (kind == "bump") {
    need(2);
    return InitialProfile::bump(params[0], params[1]);
  }
  throw std::runtime_error("config: unknown initial kind '" + kind + "'");
}

}  // namespace

InitialData make_initial(const ExperimentConfig& cfg) {
  InitialData init;
  init.u0 = make_profile(cfg.u0_kind, cfg.u0_params);
  init.v0 = make_profile(cfg.v0_kind, cfg.v0_params);
  return init;
}

GridSpec make_grid(const ExperimentConfig& cfg) {
  GridSpec grid;
  grid.dim = cfg.dim;
  grid.length = cfg.length;
  grid.modes = cfg.modes;
  grid.t_max = cfg.observe_t;
  grid.steps = cfg.steps;
  grid.validate();
  return grid;
}

SpdeSolver make_solver(const ExperimentConfig& cfg) {
  return SpdeSolver(make_grid(cfg), make_measure(cfg), make_solution(cfg),
                    make_coefficients(cfg), make_initial(cfg), cfg.observe_x,
                    cfg.seed);
}

}  // namespace spdelab
