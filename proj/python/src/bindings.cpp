#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

#include "spdelab/config.hpp"
#include "spdelab/density.hpp"
#include "spdelab/malliavin.hpp"
#include "spdelab/noise.hpp"
#include "spdelab/phi_functional.hpp"

namespace py = pybind11;
using namespace spdelab;

namespace {

const char* status_name(IntegralStatus s) {
  switch (s) {
    case IntegralStatus::finite: return "finite";
    case IntegralStatus::infinite: return "infinite";
    default: return "indeterminate";
  }
}

py::dict integral_dict(const WeightedIntegral& wi) {
  py::dict d;
  d["status"] = status_name(wi.status);
  d["value"] = wi.value;
  d["error"] = wi.error;
  d["tail_slope"] = wi.tail_slope;
  return d;
}

FundamentalSolution::Kind solution_kind(const std::string& kind) {
  if (kind == "heat") return FundamentalSolution::Kind::heat;
  if (kind == "wave") return FundamentalSolution::Kind::wave;
  if (kind == "damped_wave") return FundamentalSolution::Kind::damped_wave;
  throw std::invalid_argument("unknown operator kind: " + kind);
}

py::dict density_dict(const DensityEstimate& est) {
  py::dict d;
  d["z"] = est.z;
  d["p_hat"] = est.p_hat;
  d["ci"] = est.ci;
  d["counts"] = est.counts;
  d["bin_width"] = est.bin_width;
  d["bandwidth"] = est.bandwidth;
  d["n"] = est.n;
  d["mean"] = est.mean;
  d["sd"] = est.sd;
  d["degenerate"] = est.degenerate;
  return d;
}

ExperimentConfig config_with_overrides(const std::string& text,
                                       std::optional<std::size_t> samples,
                                       std::optional<std::uint64_t> seed,
                                       int threads) {
  ExperimentConfig cfg = parse_config(text);
  if (samples) cfg.samples = *samples;
  if (seed) cfg.seed = *seed;
  if (threads > 0) cfg.threads = threads;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Lattice laboratory for stochastic heat and wave equations driven by "
      "spatially homogeneous Gaussian noise";

  py::class_<SpectralMeasure>(m, "Measure",
                              "Spatially homogeneous noise spectrum")
      .def_static("white", &SpectralMeasure::white, py::arg("dim"))
      .def_static("riesz", &SpectralMeasure::riesz, py::arg("beta"),
                  py::arg("dim"))
      .def_static("exponential", &SpectralMeasure::exponential,
                  py::arg("length_scale"), py::arg("dim"))
      .def_property_readonly("dim", &SpectralMeasure::dim)
      .def("describe", &SpectralMeasure::describe)
      .def(
          "dalang_integral",
          [](const SpectralMeasure& mu, double eta) {
            return integral_dict(dalang_integral(mu, eta));
          },
          py::arg("eta") = 1.0,
          "Screening integral of the spectrum against (1+|xi|^2)^{-eta}")
      .def("is_admissible",
           [](const SpectralMeasure& mu) { return is_admissible(mu).admissible; })
      .def("__repr__", [](const SpectralMeasure& mu) {
        return "<Measure " + mu.describe() + ">";
      });

  py::class_<FundamentalSolution>(m, "Solution",
                                  "Fundamental solution in frequency space")
      .def(py::init([](const std::string& kind, int dim) {
             return FundamentalSolution(solution_kind(kind), dim);
           }),
           py::arg("kind"), py::arg("dim"))
      .def("fourier_transform", &FundamentalSolution::fourier_transform,
           py::arg("t"), py::arg("r"))
      .def("time_integral_sq", &FundamentalSolution::time_integral_sq,
           py::arg("t"), py::arg("r"),
           "int_0^t FG(s)(xi)^2 ds at radius r = |xi|")
      .def("total_mass", &FundamentalSolution::total_mass, py::arg("t"))
      .def("psi", &FundamentalSolution::psi, py::arg("t"),
           "int_0^t G(s, R^d) ds");

  m.def(
      "phi",
      [](const SpectralMeasure& mu, const FundamentalSolution& sol, double t) {
        const PhiResult r = phi(mu, sol, t);
        py::dict d;
        d["value"] = r.value;
        d["error"] = r.error;
        d["method"] = r.method;
        d["flagged"] = r.flagged;
        return d;
      },
      py::arg("measure"), py::arg("solution"), py::arg("t"),
      "Variance functional Phi(t)");

  m.def("psi",
        [](const FundamentalSolution& sol, double t) { return psi(sol, t); },
        py::arg("solution"), py::arg("t"));

  m.def(
      "phi_profile",
      [](const SpectralMeasure& mu, const FundamentalSolution& sol,
         const std::vector<double>& ts) {
        const PhiProfile p = phi_profile(mu, sol, ts);
        py::list out;
        for (const PhiPoint& pt : p.points) {
          py::dict d;
          d["t"] = pt.t;
          d["phi"] = pt.phi;
          d["error"] = pt.error;
          d["flagged"] = pt.flagged;
          out.append(d);
        }
        return out;
      },
      py::arg("measure"), py::arg("solution"), py::arg("ts"));

  m.def(
      "certify_gamma",
      [](const SpectralMeasure& mu, const FundamentalSolution& sol,
         double gamma, double t_min, double t_max, int points) {
        const PhiProfile p =
            phi_profile(mu, sol, log_spaced(t_min, t_max, points));
        const GammaCertificate c = certify_gamma(p, gamma);
        py::dict d;
        d["valid"] = c.valid;
        d["gamma"] = c.gamma;
        d["constant"] = c.constant;
        d["last_decade_slope"] = c.last_decade_slope;
        d["reason"] = c.reason;
        return d;
      },
      py::arg("measure"), py::arg("solution"), py::arg("gamma"),
      py::arg("t_min") = 1e-3, py::arg("t_max") = 1.0, py::arg("points") = 48,
      "Certify the small-time lower bound Phi(t) >= C t^gamma");

  m.def(
      "truncated_phi",
      [](const std::string& config_text) {
        const ExperimentConfig cfg = parse_config(config_text);
        return truncated_phi(make_grid(cfg), make_measure(cfg),
                             make_solution(cfg), cfg.observe_t);
      },
      py::arg("config_text"),
      "Variance mass of Phi(t) retained by the configured frequency band");

  m.def(
      "config_hash",
      [](const std::string& config_text) {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx",
                      (unsigned long long)config_hash(parse_config(config_text)));
        return std::string(buf);
      },
      py::arg("config_text"));

  m.def(
      "run_ensemble",
      [](const std::string& config_text, std::optional<std::size_t> samples,
         std::optional<std::uint64_t> seed, int threads) {
        const ExperimentConfig cfg =
            config_with_overrides(config_text, samples, seed, threads);
        const SpdeSolver solver = make_solver(cfg);
        const EnsembleResult ens = run_ensemble(solver, cfg.samples, cfg.threads);
        py::dict d;
        d["values"] = ens.values;
        d["noise_parts"] = ens.noise_parts;
        d["quadratic_variations"] = ens.quadratic_variations;
        d["initial_value"] = ens.initial_at_obs;
        d["truncated_phi"] = truncated_phi(solver.grid(), solver.measure(),
                                           solver.solution(), solver.grid().t_max);
        d["scheme_noise_variance"] = solver.scheme_noise_variance();
        return d;
      },
      py::arg("config_text"), py::arg("samples") = py::none(),
      py::arg("seed") = py::none(), py::arg("threads") = 1,
      "Monte Carlo ensemble of the configured observable");

  m.def(
      "estimate_density",
      [](const std::vector<double>& samples, std::size_t bins, double bw_factor) {
        return density_dict(estimate_density(samples, bins, bw_factor));
      },
      py::arg("samples"), py::arg("bins") = 128, py::arg("bw_factor") = 1.0);

  m.def(
      "fit_envelope",
      [](const std::vector<double>& samples, double phi_scale, double center,
         double offset, std::size_t bins) {
        const DensityEstimate est = estimate_density(samples, bins);
        const EnvelopeFit fit = fit_envelope(est, phi_scale, center, offset);
        py::dict d;
        d["feasible"] = fit.feasible;
        d["c1"] = fit.params.c1;
        d["c2"] = fit.params.c2;
        d["c2_unsnapped"] = fit.c2_unsnapped;
        if (fit.feasible) {
          const EnvelopeCheck check = verify_envelope(est, fit.params);
          d["violations"] = check.violations;
          d["pass"] = check.pass;
        }
        return d;
      },
      py::arg("samples"), py::arg("phi"), py::arg("center"),
      py::arg("offset") = 0.0, py::arg("bins") = 128,
      "Smallest Gaussian-shaped envelope dominating the sample density");

  m.def(
      "verify_envelope",
      [](const std::vector<double>& samples, double c1, double c2,
         double phi_scale, double center, double offset, std::size_t bins) {
        const DensityEstimate est = estimate_density(samples, bins);
        const EnvelopeCheck check = verify_envelope(
            est, EnvelopeParams{c1, c2, offset, center, phi_scale});
        py::dict d;
        d["violations"] = check.violations;
        d["max_ratio"] = check.max_ratio;
        d["pass"] = check.pass;
        return d;
      },
      py::arg("samples"), py::arg("c1"), py::arg("c2"), py::arg("phi"),
      py::arg("center"), py::arg("offset") = 0.0, py::arg("bins") = 128);

  m.def(
      "two_sided",
      [](const std::vector<double>& samples, double phi_scale, double center,
         double ratio_limit, std::size_t bins) {
        const TwoSidedCheck check =
            two_sided_check(estimate_density(samples, bins), phi_scale, center,
                            ratio_limit);
        py::dict d;
        d["c_min"] = check.c_min;
        d["c_max"] = check.c_max;
        d["ratio"] = check.ratio;
        d["bins_used"] = check.bins_used;
        d["pass"] = check.pass;
        return d;
      },
      py::arg("samples"), py::arg("phi"), py::arg("center"),
      py::arg("ratio_limit") = 4.0, py::arg("bins") = 128);

  m.def(
      "tail_decay",
      [](const std::vector<double>& samples, double phi_scale, double center,
         std::size_t bins) {
        const TailDecayFit fit =
            tail_decay_fit(estimate_density(samples, bins), phi_scale, center);
        py::dict d;
        d["decay"] = fit.decay;
        d["decay_se"] = fit.decay_se;
        d["decay_positive"] = fit.decay_positive;
        d["curvature"] = fit.curvature;
        d["curvature_se"] = fit.curvature_se;
        d["nonquadratic"] = fit.nonquadratic;
        d["bins_used"] = fit.bins_used;
        d["enough_bins"] = fit.enough_bins;
        return d;
      },
      py::arg("samples"), py::arg("phi"), py::arg("center"),
      py::arg("bins") = 128);

  m.def("ks_against_normal", &ks_against_normal, py::arg("samples"),
        py::arg("mean"), py::arg("variance"));

  m.def(
      "window_scaling",
      [](const std::string& config_text, const std::vector<double>& deltas,
         std::size_t paths, int threads) {
        const ExperimentConfig cfg = parse_config(config_text);
        const SpdeSolver solver = make_solver(cfg);
        const WindowScalingReport rep =
            window_scaling(solver, deltas, paths, threads);
        py::dict d;
        d["deltas"] = rep.deltas;
        d["phi_deltas"] = rep.phi_deltas;
        d["mean_norms"] = rep.mean_norms;
        d["ses"] = rep.ses;
        d["slope"] = rep.loglog.slope;
        d["slope_se"] = rep.loglog.slope_se;
        d["r2"] = rep.loglog.r2;
        return d;
      },
      py::arg("config_text"), py::arg("deltas"), py::arg("paths") = 200,
      py::arg("threads") = 1,
      "E|Du|^2 over trailing windows against Phi(delta)");
}
