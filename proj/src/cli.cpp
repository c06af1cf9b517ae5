#include "spdelab/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spdelab/config.hpp"
#include "spdelab/density.hpp"
#include "spdelab/malliavin.hpp"
#include "spdelab/noise.hpp"
#include "spdelab/phi_functional.hpp"

namespace spdelab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)(h));
  return buf;
}

//! All artifacts are written whole-file via a temp-and-rename so readers
//! never observe a partial file and reruns produce byte-identical output.
void write_text_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_json_atomic(const fs::path& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

std::vector<double> read_samples(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<double> xs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size())
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected one number per line");
    xs.push_back(v);
  }
  if (xs.empty()) throw std::runtime_error(path.string() + ": no samples");
  return xs;
}

json load_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  in >> j;
  return j;
}

// ---------------------------------------------------------------------------

struct CheckMeasureOpts {
  std::string config;
  double eta = 1.0;
  std::string out;
};

int cmd_check_measure(const CheckMeasureOpts& o) {
  const ExperimentConfig cfg = load_config(o.config);
  json j;
  j["kind"] = cfg.measure_kind;
  j["dim"] = cfg.dim;
  j["eta"] = o.eta;
  int rc = 0;
  try {
    const SpectralMeasure mu = make_measure(cfg);
    const WeightedIntegral wi = dalang_integral(mu, o.eta);
    j["constructible"] = true;
    j["finite"] = wi.status == IntegralStatus::finite;
    j["indeterminate"] = wi.status == IntegralStatus::indeterminate;
    j["tail_slope"] = wi.tail_slope;
    if (wi.status == IntegralStatus::finite) {
      j["value"] = wi.value;
      j["error"] = wi.error;
    }
    j["verdict"] =
        wi.status == IntegralStatus::finite ? "admissible" : "inadmissible";
    rc = wi.status == IntegralStatus::finite ? 0 : 2;
  } catch (const std::exception& e) {
    // the configured measure does not even define a valid covariance
    j["constructible"] = false;
    j["finite"] = false;
    j["verdict"] = "inadmissible";
    j["reason"] = e.what();
    rc = 2;
  }
  const std::string text = j.dump(2) + "\n";
  if (o.out.empty())
    std::cout << text;
  else
    write_text_atomic(o.out, text);
  return rc;
}

// ---------------------------------------------------------------------------

struct PhiOpts {
  std::string config;
  std::string out;
  int points = 33;
  double t_min = 0.0;
  bool has_t_min = false;
  double t_max = 0.0;
  bool has_t_max = false;
  double gamma = 0.0;
  bool has_gamma = false;
  std::string gamma_out;
};

int cmd_phi(const PhiOpts& o) {
  const ExperimentConfig cfg = load_config(o.config);
  const SpectralMeasure mu = make_measure(cfg);
  const FundamentalSolution sol = make_solution(cfg);

  const double t_max = o.has_t_max ? o.t_max : cfg.observe_t;
  if (!(t_max > 0.0)) throw std::runtime_error("phi: t-max must be positive");
  const double t_min = o.has_t_min ? o.t_min : t_max / 1000.0;
  if (!(t_min > 0.0) || t_min > t_max)
    throw std::runtime_error("phi: need 0 < t-min <= t-max");
  if (o.points < 1) throw std::runtime_error("phi: points must be >= 1");

  const std::vector<double> ts =
      o.points == 1 ? std::vector<double>{t_max}
                    : log_spaced(t_min, t_max, o.points);
  const PhiProfile profile = phi_profile(mu, sol, ts);

  std::string csv = "t,phi,error,flagged\n";
  for (const PhiPoint& p : profile.points)
    csv += fmt17(p.t) + "," + fmt17(p.phi) + "," + fmt17(p.error) + "," +
           (p.flagged ? "1" : "0") + "\n";
  write_text_atomic(o.out, csv);

  if (!o.has_gamma) return 0;
  const GammaCertificate cert = certify_gamma(profile, o.gamma);
  json j;
  j["gamma"] = o.gamma;
  j["valid"] = cert.valid;
  j["constant"] = cert.constant;
  j["last_decade_slope"] = cert.last_decade_slope;
  j["reason"] = cert.reason;
  const std::string gpath =
      o.gamma_out.empty() ? o.out + ".gamma.json" : o.gamma_out;
  write_json_atomic(gpath, j);
  return cert.valid ? 0 : 2;
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
  std::string config;
  std::string out;
  std::uint64_t samples = 0;
  bool has_samples = false;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int threads = 0;
  bool has_threads = false;
};

int cmd_simulate(const SimulateOpts& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.has_samples) cfg.samples = o.samples;
  if (o.has_seed) cfg.seed = o.seed;
  if (o.has_threads) cfg.threads = o.threads;
  if (cfg.samples < 1) throw std::runtime_error("simulate: samples must be >= 1");
  if (cfg.threads < 1) throw std::runtime_error("simulate: threads must be >= 1");

  const SpdeSolver solver = make_solver(cfg);
  const EnsembleResult ens = run_ensemble(solver, cfg.samples, cfg.threads);

  const fs::path dir(o.out);
  fs::create_directories(dir);

  std::string samples_csv;
  samples_csv.reserve(ens.values.size() * 24);
  for (double v : ens.values) samples_csv += fmt17(v) + "\n";
  write_text_atomic(dir / "samples.csv", samples_csv);

  std::string dec = "value,noise_part,quadratic_variation\n";
  for (std::size_t i = 0; i < ens.values.size(); ++i)
    dec += fmt17(ens.values[i]) + "," + fmt17(ens.noise_parts[i]) + "," +
           fmt17(ens.quadratic_variations[i]) + "\n";
  write_text_atomic(dir / "decomposition.csv", dec);

  write_text_atomic(dir / "config.canonical.toml", canonical_text(cfg));

  const GridSpec grid = make_grid(cfg);
  const SpectralMeasure mu = make_measure(cfg);
  const FundamentalSolution sol = make_solution(cfg);
  json man;
  man["format"] = "spdelab-run/1";
  man["config_hash"] = hash_hex(config_hash(cfg));
  man["samples"] = cfg.samples;
  man["seed"] = cfg.seed;
  man["observable"]["t"] = cfg.observe_t;
  man["observable"]["x"] = cfg.observe_x;
  man["observable"]["initial_value"] = ens.initial_at_obs;
  man["scales"]["truncated_phi"] = truncated_phi(grid, mu, sol, grid.t_max);
  man["scales"]["continuum_phi"] = phi(mu, sol, grid.t_max).value;
  man["scales"]["truncation_gap"] = truncation_gap(grid, mu, sol, grid.t_max);
  man["scales"]["scheme_noise_variance"] = solver.scheme_noise_variance();
  man["artifacts"]["samples"] = "samples.csv";
  man["artifacts"]["decomposition"] = "decomposition.csv";
  man["artifacts"]["canonical_config"] = "config.canonical.toml";
  write_json_atomic(dir / "manifest.json", man);
  return 0;
}

// ---------------------------------------------------------------------------

struct DensityOpts {
  std::string in;
  std::string out;
  std::size_t bins = 128;
  double bw_factor = 1.0;
};

int cmd_density(const DensityOpts& o) {
  const std::vector<double> samples = read_samples(fs::path(o.in) / "samples.csv");
  const DensityEstimate est = estimate_density(samples, o.bins, o.bw_factor);
  if (est.degenerate)
    throw std::runtime_error("density: sample set is a point mass");
  std::string csv = "z,p_hat,ci\n";
  for (std::size_t i = 0; i < est.z.size(); ++i)
    csv += fmt17(est.z[i]) + "," + fmt17(est.p_hat[i]) + "," +
           fmt17(est.ci[i]) + "\n";
  write_text_atomic(o.out, csv);
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyOpts {
  std::string in;
  std::string out;
  std::size_t bins = 128;
  double bw_factor = 1.0;
  double c1 = 0.0;
  bool has_c1 = false;
  double c2 = 0.0;
  bool has_c2 = false;
  double offset = 0.0;
  bool two_sided = false;
  double ratio_limit = 4.0;
};

int cmd_verify_upper_bound(const VerifyOpts& o) {
  if (o.has_c1 != o.has_c2)
    throw std::runtime_error("verify-upper-bound: give both --c1 and --c2 or neither");

  const json man = load_manifest(o.in);
  const double phi_scale = man.at("scales").at("truncated_phi").get<double>();
  const double center =
      man.at("observable").at("initial_value").get<double>();

  const std::vector<double> samples = read_samples(fs::path(o.in) / "samples.csv");
  const DensityEstimate est = estimate_density(samples, o.bins, o.bw_factor);
  if (est.degenerate)
    throw std::runtime_error("verify-upper-bound: sample set is a point mass");

  const fs::path dir(o.out.empty() ? o.in : o.out);
  fs::create_directories(dir);

  json j;
  j["phi"] = phi_scale;
  j["center"] = center;
  j["offset"] = o.offset;
  j["samples"] = samples.size();
  j["bins"] = est.z.size();

  EnvelopeParams params;
  bool have_params = false;
  bool envelope_pass = false;
  if (o.has_c1) {
    params = EnvelopeParams{o.c1, o.c2, o.offset, center, phi_scale};
    have_params = true;
    j["fitted"] = false;
  } else {
    const EnvelopeFit fit = fit_envelope(est, phi_scale, center, o.offset);
    j["fitted"] = true;
    j["feasible"] = fit.feasible;
    if (fit.feasible) {
      params = fit.params;
      have_params = true;
      j["c2_unsnapped"] = fit.c2_unsnapped;
    }
  }
  if (have_params) {
    const EnvelopeCheck check = verify_envelope(est, params);
    envelope_pass = check.pass;
    j["c1"] = params.c1;
    j["c2"] = params.c2;
    j["violations"] = check.violations;
    j["max_ratio"] = check.max_ratio;

    std::string csv = "z,p_hat,ci,bound\n";
    for (std::size_t i = 0; i < est.z.size(); ++i)
      csv += fmt17(est.z[i]) + "," + fmt17(est.p_hat[i]) + "," +
             fmt17(est.ci[i]) + "," + fmt17(envelope_value(params, est.z[i])) +
             "\n";
    write_text_atomic(dir / "bound.csv", csv);
  }
  j["envelope_pass"] = envelope_pass;

  const TailDecayFit tail = tail_decay_fit(est, phi_scale, center);
  j["tail"]["bins_used"] = tail.bins_used;
  j["tail"]["enough_bins"] = tail.enough_bins;
  j["tail"]["decay"] = tail.decay;
  j["tail"]["decay_se"] = tail.decay_se;
  j["tail"]["decay_positive"] = tail.decay_positive;
  j["tail"]["curvature"] = tail.curvature;
  j["tail"]["curvature_se"] = tail.curvature_se;
  j["tail"]["nonquadratic"] = tail.nonquadratic;
  const bool tail_pass =
      !tail.enough_bins || (tail.decay_positive && !tail.nonquadratic);
  j["tail"]["pass"] = tail_pass;

  bool two_pass = true;
  if (o.two_sided) {
    const TwoSidedCheck two =
        two_sided_check(est, phi_scale, center, o.ratio_limit);
    j["two_sided"]["c_min"] = two.c_min;
    j["two_sided"]["c_max"] = two.c_max;
    j["two_sided"]["ratio"] = two.ratio;
    j["two_sided"]["bins_used"] = two.bins_used;
    j["two_sided"]["ratio_limit"] = o.ratio_limit;
    j["two_sided"]["pass"] = two.pass;
    two_pass = two.pass;
  }

  const bool pass = envelope_pass && tail_pass && two_pass;
  j["pass"] = pass;
  write_json_atomic(dir / "envelope.json", j);
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 2;
}

// ---------------------------------------------------------------------------

struct MalliavinOpts {
  std::string config;
  std::string out;
  std::size_t paths = 1000;
  int n_deltas = 6;
  double delta_min = 0.0;
  bool has_delta_min = false;
  double delta_max = 0.0;
  bool has_delta_max = false;
  int threads = 0;
  bool has_threads = false;
  bool negative_moments = false;
  std::size_t nm_paths = 256;
  int nm_ts = 5;
};

int cmd_malliavin_scaling(const MalliavinOpts& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.has_threads) cfg.threads = o.threads;
  const SpdeSolver solver = make_solver(cfg);
  const GridSpec& grid = solver.grid();

  const double dt = grid.dt();
  const double dmin = o.has_delta_min ? o.delta_min : 8.0 * dt;
  const double dmax = o.has_delta_max ? o.delta_max : grid.t_max / 2.0;
  if (o.n_deltas < 2)
    throw std::runtime_error("malliavin-scaling: need at least 2 deltas");
  const std::vector<double> deltas = log_spaced(dmin, dmax, o.n_deltas);

  const WindowScalingReport rep =
      window_scaling(solver, deltas, o.paths, cfg.threads);

  const fs::path dir(o.out);
  fs::create_directories(dir);

  std::string csv = "delta,phi_delta,mean_sq_norm,se\n";
  for (std::size_t i = 0; i < rep.deltas.size(); ++i)
    csv += fmt17(rep.deltas[i]) + "," + fmt17(rep.phi_deltas[i]) + "," +
           fmt17(rep.mean_norms[i]) + "," + fmt17(rep.ses[i]) + "\n";
  write_text_atomic(dir / "scaling.csv", csv);

  json j;
  j["config_hash"] = hash_hex(config_hash(cfg));
  j["paths"] = o.paths;
  j["slope"] = rep.loglog.slope;
  j["slope_se"] = rep.loglog.slope_se;
  j["intercept"] = rep.loglog.intercept;
  j["r2"] = rep.loglog.r2;

  if (o.negative_moments) {
    const std::vector<double> ts =
        log_spaced(grid.t_max / 10.0, grid.t_max, o.nm_ts);
    const NegativeMomentReport nrep = negative_moment_survey(
        solver.measure(), solver.solution(), solver.coefficients(),
        make_initial(cfg), cfg.observe_x, grid, ts, o.nm_paths, cfg.seed,
        cfg.threads);
    std::string ncsv = "t,phi,mean_inv_norm,product\n";
    for (std::size_t i = 0; i < nrep.ts.size(); ++i)
      ncsv += fmt17(nrep.ts[i]) + "," + fmt17(nrep.phi_ts[i]) + "," +
              fmt17(nrep.mean_inv_norms[i]) + "," + fmt17(nrep.products[i]) +
              "\n";
    write_text_atomic(dir / "negmoments.csv", ncsv);
    j["negative_moments"]["paths"] = o.nm_paths;
    j["negative_moments"]["max_min_ratio"] = nrep.max_min_ratio;
  }
  write_json_atomic(dir / "scaling.json", j);
  return 0;
}

// ---------------------------------------------------------------------------

struct ReportOpts {
  std::vector<std::string> in;
  std::string out;
};

int cmd_report(const ReportOpts& o) {
  if (o.in.empty()) throw std::runtime_error("report: no input runs");
  std::string hash;
  std::vector<std::uint64_t> seeds;
  std::vector<double> pooled;
  json runs = json::array();
  for (const std::string& dir : o.in) {
    const json man = load_manifest(dir);
    const std::string h = man.at("config_hash").get<std::string>();
    if (hash.empty()) hash = h;
    if (h != hash)
      throw std::runtime_error("report: run " + dir +
                               " has a different config hash; refusing to pool");
    const std::uint64_t seed = man.at("seed").get<std::uint64_t>();
    for (std::uint64_t s : seeds)
      if (s == seed)
        throw std::runtime_error(
            "report: duplicate seed " + std::to_string(seed) +
            "; pooled runs must be independent");
    seeds.push_back(seed);
    const std::vector<double> xs = read_samples(fs::path(dir) / "samples.csv");
    pooled.insert(pooled.end(), xs.begin(), xs.end());
    json r;
    r["dir"] = dir;
    r["seed"] = seed;
    r["samples"] = xs.size();
    runs.push_back(r);
  }
  const MeanVar mv = mean_var(pooled);
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  json j;
  j["config_hash"] = hash;
  j["runs"] = runs;
  j["total_samples"] = pooled.size();
  j["mean"] = mv.mean;
  j["variance"] = mv.var;
  j["se_mean"] = mv.se_mean;
  j["min"] = sorted.front();
  j["max"] = sorted.back();
  for (double q : {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99}) {
    char key[8];
    std::snprintf(key, sizeof key, "q%02d", int(q * 100 + 0.5));
    j["quantiles"][key] = sorted_quantile(sorted, q);
  }
  write_json_atomic(o.out, j);
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------

int run_command(int argc, const char* const* argv) {
  CLI::App app{
      "spdelab: lattice laboratory for stochastic heat and wave equations "
      "driven by spatially homogeneous Gaussian noise"};
  app.require_subcommand(1);

  int rc = 0;

  CheckMeasureOpts check;
  auto* c_check = app.add_subcommand(
      "check-measure",
      "Evaluate the screening integral of the configured noise and report an "
      "admissible/inadmissible verdict (exit 2 when inadmissible)");
  c_check->add_option("--config", check.config, "experiment config file")
      ->required();
  c_check->add_option("--eta", check.eta, "screening exponent in (0, 1]");
  c_check->add_option("--out", check.out, "write the JSON verdict here");
  c_check->callback([&]() { rc = cmd_check_measure(check); });

  PhiOpts phi_o;
  auto* c_phi = app.add_subcommand(
      "phi",
      "Tabulate the variance functional on a log time grid; optionally "
      "certify a small-time power lower bound (exit 2 when invalid)");
  c_phi->add_option("--config", phi_o.config, "experiment config file")
      ->required();
  c_phi->add_option("--out", phi_o.out, "output CSV (t,phi,error,flagged)")
      ->required();
  c_phi->add_option("--points", phi_o.points, "grid size (1 = only t-max)");
  auto* opt_tmin = c_phi->add_option("--t-min", phi_o.t_min, "smallest time");
  auto* opt_tmax = c_phi->add_option("--t-max", phi_o.t_max,
                                     "largest time (default: observe.t)");
  auto* opt_gamma = c_phi->add_option(
      "--gamma", phi_o.gamma, "certify phi(t) >= C t^gamma near t = 0");
  c_phi->add_option("--gamma-out", phi_o.gamma_out,
                    "certificate JSON (default: <out>.gamma.json)");
  c_phi->callback([&, opt_tmin, opt_tmax, opt_gamma]() {
    phi_o.has_t_min = opt_tmin->count() > 0;
    phi_o.has_t_max = opt_tmax->count() > 0;
    phi_o.has_gamma = opt_gamma->count() > 0;
    rc = cmd_phi(phi_o);
  });

  SimulateOpts sim;
  auto* c_sim = app.add_subcommand(
      "simulate",
      "Monte Carlo ensemble of the observable u(t, x); writes samples.csv, "
      "decomposition.csv and manifest.json into --out");
  c_sim->add_option("--config", sim.config, "experiment config file")
      ->required();
  c_sim->add_option("--out", sim.out, "output directory")->required();
  auto* opt_samples =
      c_sim->add_option("--samples", sim.samples, "override [run] samples");
  auto* opt_seed = c_sim->add_option("--seed", sim.seed, "override [run] seed");
  auto* opt_threads =
      c_sim->add_option("--threads", sim.threads,
                        "worker threads (never affects the numbers)");
  c_sim->callback([&, opt_samples, opt_seed, opt_threads]() {
    sim.has_samples = opt_samples->count() > 0;
    sim.has_seed = opt_seed->count() > 0;
    sim.has_threads = opt_threads->count() > 0;
    rc = cmd_simulate(sim);
  });

  DensityOpts den;
  auto* c_den = app.add_subcommand(
      "density", "Histogram density of a simulated run with 95% bin error");
  c_den->add_option("--in", den.in, "run directory from simulate")->required();
  c_den->add_option("--out", den.out, "output CSV (z,p_hat,ci)")->required();
  c_den->add_option("--bins", den.bins, "bin count (>= 64)");
  c_den->add_option("--bw-factor", den.bw_factor, "padding scale factor");
  c_den->callback([&]() { rc = cmd_density(den); });

  VerifyOpts ver;
  auto* c_ver = app.add_subcommand(
      "verify-upper-bound",
      "Check (or fit) the Gaussian-shaped density upper bound on a simulated "
      "run; exit 2 on FAIL");
  c_ver->add_option("--in", ver.in, "run directory from simulate")->required();
  c_ver->add_option("--out", ver.out, "output directory (default: --in)");
  c_ver->add_option("--bins", ver.bins, "bin count (>= 64)");
  c_ver->add_option("--bw-factor", ver.bw_factor, "padding scale factor");
  auto* opt_c1 = c_ver->add_option("--c1", ver.c1, "bound amplitude constant");
  auto* opt_c2 = c_ver->add_option("--c2", ver.c2, "bound rate constant");
  c_ver->add_option("--offset", ver.offset,
                    "drift allowance subtracted from |z - center|");
  c_ver->add_flag("--two-sided", ver.two_sided,
                  "also require a two-sided Gaussian-shape comparison");
  c_ver->add_option("--ratio-limit", ver.ratio_limit,
                    "two-sided spread limit (default 4)");
  c_ver->callback([&, opt_c1, opt_c2]() {
    ver.has_c1 = opt_c1->count() > 0;
    ver.has_c2 = opt_c2->count() > 0;
    rc = cmd_verify_upper_bound(ver);
  });

  MalliavinOpts mal;
  auto* c_mal = app.add_subcommand(
      "malliavin-scaling",
      "Window scaling of the derivative norm E|Du|^2 over [t-delta, t] "
      "against phi(delta); optionally the inverse-moment survey");
  c_mal->add_option("--config", mal.config, "experiment config file")
      ->required();
  c_mal->add_option("--out", mal.out, "output directory")->required();
  c_mal->add_option("--paths", mal.paths, "Monte Carlo paths (>= 100)");
  c_mal->add_option("--deltas", mal.n_deltas, "number of window widths");
  auto* opt_dmin =
      c_mal->add_option("--delta-min", mal.delta_min, "smallest window");
  auto* opt_dmax =
      c_mal->add_option("--delta-max", mal.delta_max, "largest window");
  auto* opt_mthreads = c_mal->add_option("--threads", mal.threads,
                                         "worker threads");
  c_mal->add_flag("--negative-moments", mal.negative_moments,
                  "also survey E|Du|^{-2} * phi(t) across horizons");
  c_mal->add_option("--nm-paths", mal.nm_paths, "paths per horizon");
  c_mal->add_option("--nm-ts", mal.nm_ts, "number of horizons");
  c_mal->callback([&, opt_dmin, opt_dmax, opt_mthreads]() {
    mal.has_delta_min = opt_dmin->count() > 0;
    mal.has_delta_max = opt_dmax->count() > 0;
    mal.has_threads = opt_mthreads->count() > 0;
    rc = cmd_malliavin_scaling(mal);
  });

  ReportOpts rep;
  auto* c_rep = app.add_subcommand(
      "report", "Pool several runs of the same experiment (distinct seeds) "
                "into one summary JSON");
  c_rep->add_option("--in", rep.in, "run directories")->required();
  c_rep->add_option("--out", rep.out, "output JSON")->required();
  c_rep->callback([&]() { rc = cmd_report(rep); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

int run_command(const std::vector<std::string>& args) {
  std::vector<std::string> owned;
  owned.reserve(args.size() + 1);
  owned.push_back("spdelab");
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(owned.size());
  for (const std::string& s : owned) argv.push_back(s.c_str());
  return run_command(int(argv.size()), argv.data());
}

}  // namespace spdelab
