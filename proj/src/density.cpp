#include "spdelab/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spdelab {

DensityEstimate estimate_density(const std::vector<double>& samples,
                                 std::size_t bins, double bw_factor) {
  if (samples.size() < 2)
    throw std::invalid_argument("estimate_density: need at least 2 samples");
  if (!(bw_factor > 0.0))
    throw std::invalid_argument("estimate_density: bw_factor must be positive");
  bins = std::max<std::size_t>(bins, 64);

  DensityEstimate est;
  est.n = samples.size();
  const MeanVar mv = mean_var(samples);
  est.mean = mv.mean;
  est.sd = std::sqrt(mv.var);

  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double lo_q = sorted_quantile(sorted, 0.25);
  const double hi_q = sorted_quantile(sorted, 0.75);
  const double iqr = hi_q - lo_q;

  double spread = std::min(est.sd, iqr / 1.34);
  if (spread <= 0.0) spread = est.sd;  // IQR can vanish on clumped data
  if (spread <= 0.0 || sorted.back() == sorted.front()) {
    est.degenerate = true;
    est.z = {sorted.front()};
    est.counts = {est.n};
    est.p_hat = {0.0};
    est.ci = {0.0};
    return est;
  }

  est.bandwidth =
      0.9 * spread * std::pow(double(est.n), -0.2) * bw_factor;
  const double lo = sorted.front() - 4.0 * est.bandwidth;
  const double hi = sorted.back() + 4.0 * est.bandwidth;
  est.bin_width = (hi - lo) / double(bins);

  est.counts.assign(bins, 0);
  for (double x : samples) {
    auto idx = std::size_t(std::floor((x - lo) / est.bin_width));
    idx = std::min(idx, bins - 1);
    ++est.counts[idx];
  }
  est.z.resize(bins);
  est.p_hat.resize(bins);
  est.ci.resize(bins);
  const double scale = 1.0 / (double(est.n) * est.bin_width);
  for (std::size_t i = 0; i < bins; ++i) {
    est.z[i] = lo + (double(i) + 0.5) * est.bin_width;
    est.p_hat[i] = double(est.counts[i]) * scale;
    est.ci[i] = 1.96 * std::sqrt(double(est.counts[i])) * scale;
  }
  return est;
}

double envelope_value(const EnvelopeParams& p, double z) {
  const double q = std::max(0.0, std::abs(z - p.center) - p.offset);
  return p.c1 / std::sqrt(p.phi) * std::exp(-q * q / (p.c2 * p.phi));
}

EnvelopeCheck verify_envelope(const DensityEstimate& est,
                              const EnvelopeParams& p) {
  if (est.degenerate)
    throw std::invalid_argument("verify_envelope: degenerate estimate");
  if (!(p.phi > 0.0) || !(p.c1 > 0.0) || !(p.c2 > 0.0))
    throw std::invalid_argument("verify_envelope: parameters must be positive");
  EnvelopeCheck check;
  for (std::size_t i = 0; i < est.z.size(); ++i) {
    const double lower = std::max(0.0, est.p_hat[i] - est.ci[i]);
    if (lower <= 0.0) continue;
    const double bound = envelope_value(p, est.z[i]);
    check.max_ratio = std::max(check.max_ratio, lower / bound);
    if (lower > bound) ++check.violations;
  }
  check.pass = check.violations == 0;
  return check;
}

namespace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> g;
  const double decades = std::log10(hi / lo);
  const int count = int(std::lround(decades * per_decade));
  g.reserve(count + 1);
  for (int i = 0; i <= count; ++i)
    g.push_back(lo * std::pow(10.0, decades * double(i) / double(count)));
  g.back() = hi;
  return g;
}

}  // namespace

EnvelopeFit fit_envelope(const DensityEstimate& est, double phi, double center,
                         double offset) {
  if (est.degenerate)
    throw std::invalid_argument("fit_envelope: degenerate estimate");
  if (!(phi > 0.0)) throw std::invalid_argument("fit_envelope: phi <= 0");
  if (offset < 0.0) throw std::invalid_argument("fit_envelope: offset < 0");

  // active constraints: bins whose CI lower edge is positive
  struct Constraint {
    double q;  // distance past the offset
    double l;  // lower edge
  };
  std::vector<Constraint> cons;
  for (std::size_t i = 0; i < est.z.size(); ++i) {
    const double lower = est.p_hat[i] - est.ci[i];
    if (lower <= 0.0) continue;
    cons.push_back({std::max(0.0, std::abs(est.z[i] - center) - offset), lower});
  }

  const std::vector<double> c1_grid = log_grid(1e-3, 1e3, 96);
  const std::vector<double> c2_grid = log_grid(0.1, 100.0, 96);
  const double sqrt_phi = std::sqrt(phi);

  EnvelopeFit fit;
  fit.params.offset = offset;
  fit.params.center = center;
  fit.params.phi = phi;
  if (cons.empty()) {
    fit.params.c1 = c1_grid.front();
    fit.params.c2 = c2_grid.front();
    fit.c2_unsnapped = c2_grid.front();
    fit.feasible = true;
    return fit;
  }

  for (double c1 : c1_grid) {
    const double plateau = c1 / sqrt_phi;
    bool ok = true;
    double c2_req = 0.0;
    for (const Constraint& c : cons) {
      const double log_room = std::log(plateau / c.l);
      if (c.q <= 0.0) {
        if (log_room < 0.0) {
          ok = false;
          break;
        }
      } else {
        if (log_room <= 0.0) {
          ok = false;
          break;
        }
        c2_req = std::max(c2_req, c.q * c.q / (phi * log_room));
      }
    }
    if (!ok || c2_req > c2_grid.back() * (1.0 + 1e-12)) continue;
    const auto it = std::lower_bound(c2_grid.begin(), c2_grid.end(),
                                     c2_req * (1.0 - 1e-12));
    fit.params.c1 = c1;
    fit.params.c2 = it == c2_grid.end() ? c2_grid.back() : *it;
    fit.c2_unsnapped = c2_req;
    fit.feasible = true;
    return fit;
  }
  return fit;
}

TwoSidedCheck two_sided_check(const DensityEstimate& est, double phi,
                              double center, double ratio_limit) {
  if (est.degenerate)
    throw std::invalid_argument("two_sided_check: degenerate estimate");
  if (!(phi > 0.0)) throw std::invalid_argument("two_sided_check: phi <= 0");
  TwoSidedCheck check;
  const double band = 3.0 * std::sqrt(phi);
  double cmin = 0.0, cmax = 0.0;
  for (std::size_t i = 0; i < est.z.size(); ++i) {
    if (est.counts[i] < 10) continue;
    const double d = est.z[i] - center;
    if (std::abs(d) > band) continue;
    const double c =
        est.p_hat[i] * std::sqrt(phi) * std::exp(d * d / (2.0 * phi));
    if (check.bins_used == 0) {
      cmin = cmax = c;
    } else {
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
    }
    ++check.bins_used;
  }
  check.c_min = cmin;
  check.c_max = cmax;
  check.ratio = cmin > 0.0 ? cmax / cmin
                           : std::numeric_limits<double>::infinity();
  check.pass = check.bins_used >= 8 && check.ratio < ratio_limit;
  return check;
}

TailDecayFit tail_decay_fit(const DensityEstimate& est, double phi,
                            double center) {
  if (est.degenerate)
    throw std::invalid_argument("tail_decay_fit: degenerate estimate");
  if (!(phi > 0.0)) throw std::invalid_argument("tail_decay_fit: phi <= 0");
  TailDecayFit fit;
  const double inner = 2.0 * std::sqrt(phi);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < est.z.size(); ++i) {
    if (est.counts[i] < 10) continue;
    const double d = std::abs(est.z[i] - center);
    if (d < inner) continue;
    xs.push_back(d * d);
    ys.push_back(std::log(est.p_hat[i]));
  }
  fit.bins_used = xs.size();
  fit.enough_bins = xs.size() >= 8;
  if (!fit.enough_bins) return fit;

  const LinearFit line = fit_line(xs, ys);
  fit.decay = -line.slope;
  fit.decay_se = line.slope_se;
  fit.decay_positive = fit.decay - 1.96 * fit.decay_se > 0.0;

  const QuadraticFit quad = fit_quadratic(xs, ys);
  fit.curvature = quad.c2;
  fit.curvature_se = quad.c2_se;
  fit.nonquadratic = quad.c2 > 3.0 * quad.c2_se;
  return fit;
}

double ks_against_normal(const std::vector<double>& samples, double mean,
                         double variance) {
  if (!(variance > 0.0))
    throw std::invalid_argument("ks_against_normal: variance <= 0");
  const double sd = std::sqrt(variance);
  return ks_statistic(samples, [mean, sd](double x) {
    return normal_cdf((x - mean) / sd);
  });
}

}  // namespace spdelab
