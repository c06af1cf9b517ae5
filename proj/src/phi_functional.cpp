#include "spdelab/phi_functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spdelab/numerics.hpp"

namespace spdelab {

namespace {

bool has_closed_form(const SpectralMeasure& mu, const FundamentalSolution& sol) {
  using MK = SpectralMeasure::Kind;
  using SK = FundamentalSolution::Kind;
  if (mu.kind() == MK::white && mu.dim() == 1 &&
      (sol.kind() == SK::heat || sol.kind() == SK::wave))
    return true;
  if (mu.kind() == MK::riesz && sol.kind() == SK::heat) return true;
  return false;
}

double closed_form_phi(const SpectralMeasure& mu, const FundamentalSolution& sol,
                       double t) {
  using MK = SpectralMeasure::Kind;
  using SK = FundamentalSolution::Kind;
  if (mu.kind() == MK::white && mu.dim() == 1) {
    if (sol.kind() == SK::heat) return std::sqrt(t / (2.0 * kPi));
    if (sol.kind() == SK::wave) return 0.25 * t * t;
  }
  if (mu.kind() == MK::riesz && sol.kind() == SK::heat) {
    // int_0^t (8 pi^2 s)^{-beta/2} omega_{d-1} Gamma(beta/2)/2 ds
    const double beta = mu.beta();
    const double K = surface_area(mu.dim()) * std::tgamma(0.5 * beta) /
                     (2.0 * std::pow(8.0 * kPi * kPi, 0.5 * beta));
    return K * std::pow(t, 1.0 - 0.5 * beta) / (1.0 - 0.5 * beta);
  }
  throw std::logic_error("closed_form_phi: no closed form");
}

PhiResult quadrature_phi(const SpectralMeasure& mu,
                         const FundamentalSolution& sol, double t) {
  PhiResult out;
  out.method = "quadrature";
  if (!mu.has_density()) {
    double s = 0.0;
    for (const Atom& a : mu.atom_list()) {
      double r2 = 0.0;
      for (double c : a.point) r2 += c * c;
      s += a.mass * sol.time_integral_sq(t, std::sqrt(r2));
    }
    out.value = s;
    return out;
  }
  const int d = mu.dim();
  const double omega = surface_area(d);
  auto integrand = [&mu, &sol, d, t](double r) {
    return mu.radial_density(r) * std::pow(r, double(d - 1)) *
           sol.time_integral_sq(t, r);
  };
  QuadratureResult head = integrate_power_endpoint(integrand, 1.0, 1e-13, 1e-8);
  TailResult tail = integrate_dyadic_tail(integrand, 1.0, 1e-13, 1e-8);
  out.value = omega * (head.value + tail.value);
  out.error = omega * (head.error + tail.error);
  out.flagged = !head.converged || tail.status != TailStatus::convergent ||
                (out.value > 0.0 && out.error / out.value > 1e-4);
  return out;
}

}  // namespace

PhiResult phi(const SpectralMeasure& mu, const FundamentalSolution& sol,
              double t) {
  if (t < 0.0) throw std::invalid_argument("phi: t < 0");
  AdmissibilityReport adm = is_admissible(mu);
  if (!adm.admissible)
    throw std::domain_error("phi: measure fails the weighted-integral test; "
                            "Phi would be infinite for t > 0");
  if (t == 0.0) return {0.0, 0.0, "closed-form", false};
  if (has_closed_form(mu, sol))
    return {closed_form_phi(mu, sol, t), 0.0, "closed-form", false};
  return quadrature_phi(mu, sol, t);
}

double psi(const FundamentalSolution& sol, double t) { return sol.psi(t); }

PhiProfile phi_profile(const SpectralMeasure& mu, const FundamentalSolution& sol,
                       const std::vector<double>& ts) {
  PhiProfile out;
  out.points.reserve(ts.size());
  for (double t : ts) {
    PhiResult r = phi(mu, sol, t);
    out.method = r.method;
    out.points.push_back({t, r.value, r.error, r.flagged});
  }
  return out;
}

std::vector<double> log_spaced(double a, double b, int n) {
  if (!(a > 0.0) || !(b > a) || n < 2)
    throw std::invalid_argument("log_spaced: need 0 < a < b and n >= 2");
  std::vector<double> out(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(la + (lb - la) * double(i) / double(n - 1));
  out.front() = a;
  out.back() = b;
  return out;
}

GammaCertificate certify_gamma(const PhiProfile& profile, double gamma) {
  GammaCertificate cert;
  cert.gamma = gamma;
  if (!(gamma > 0.0)) throw std::invalid_argument("certify_gamma: gamma <= 0");
  const auto& pts = profile.points;
  if (pts.size() < 32)
    throw std::invalid_argument("certify_gamma: need >= 32 profile points");
  double t_min = pts.front().t, t_max = pts.front().t;
  for (const auto& p : pts) {
    t_min = std::min(t_min, p.t);
    t_max = std::max(t_max, p.t);
  }
  if (t_max < 0.99 || t_max > 1.01 || t_min > 0.011)
    throw std::invalid_argument(
        "certify_gamma: profile must cover (0, 1] down to t <= 0.01");

  double c_min = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    if (!(p.t > 0.0)) continue;
    c_min = std::min(c_min, p.phi / std::pow(p.t, gamma));
  }
  cert.constant = c_min;

  // Slope of log(Phi/t^gamma) over the lowest decade of the grid.
  std::vector<double> lx, ly;
  for (const auto& p : pts) {
    if (p.t <= 10.0 * t_min && p.t > 0.0 && p.phi > 0.0) {
      lx.push_back(std::log(p.t));
      ly.push_back(std::log(p.phi / std::pow(p.t, gamma)));
    }
  }
  if (lx.size() < 4)
    throw std::invalid_argument("certify_gamma: lowest decade underresolved");
  LinearFit fit = fit_line(lx, ly);
  cert.last_decade_slope = fit.slope;

  constexpr double kSlopeTol = 0.02;
  if (!(c_min > 0.0)) {
    cert.valid = false;
    cert.reason = "nonpositive ratio on the grid";
  } else if (fit.slope > kSlopeTol) {
    cert.valid = false;
    cert.reason = "ratio Phi(t)/t^gamma decays toward t -> 0 (slope " +
                  std::to_string(fit.slope) + "); no uniform constant";
  } else {
    cert.valid = true;
    cert.reason = "lower bound holds on the grid with stable small-t ratio";
  }
  return cert;
}

}  // namespace spdelab
