#include "spdelab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace spdelab {

double surface_area(int dim) {
  if (dim < 1) throw std::invalid_argument("surface_area: dim must be >= 1");
  // 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK dqk15 values).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    result_kronrod += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) result_gauss += kWg[i / 2] * (f1 + f2);
  }
  const double diff = std::abs(result_kronrod - result_gauss) * std::abs(h);
  // QUADPACK-style sharpened error estimate.
  const double err = diff == 0.0 ? 0.0 : diff * std::min(1.0, std::pow(200.0 * diff / std::max(std::abs(result_kronrod) * std::abs(h), 1e-300), 1.5));
  return {a, b, result_kronrod * h, std::max(err, 1e-300)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, double rel_tol,
                           std::size_t max_intervals) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Interval> heap;
  Interval first = gk15(f, a, b);
  out.evaluations = 15;
  heap.push(first);
  double total = first.value;
  double total_err = first.error;
  std::size_t used = 1;
  while (used < max_intervals) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (total_err <= tol) break;
    Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval exhausted at machine precision; accept its estimate
      heap.push({worst.a, worst.b, worst.value, 0.0});
      continue;
    }
    Interval left = gk15(f, worst.a, mid);
    Interval right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++used;
  }
  out.value = total;
  out.error = total_err;
  out.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
  return out;
}

QuadratureResult integrate_power_endpoint(
    const std::function<double(double)>& f, double b, double abs_tol,
    double rel_tol) {
  if (b <= 0.0) return {0.0, 0.0, 0, true};
  const double sb = std::pow(b, 0.25);
  auto g = [&f](double s) {
    const double s2 = s * s;
    return 4.0 * s2 * s * f(s2 * s2);
  };
  return integrate(g, 0.0, sb, abs_tol, rel_tol);
}

TailResult integrate_dyadic_tail(const std::function<double(double)>& f,
                                 double start, double abs_tol, double rel_tol,
                                 int max_shells) {
  if (start <= 0.0) throw std::invalid_argument("dyadic tail: start must be > 0");
  TailResult out;
  std::vector<double> shell_values;
  double sum = 0.0;
  double err = 0.0;
  double lo = start;
  for (int j = 0; j < max_shells; ++j) {
    const double hi = 2.0 * lo;
    QuadratureResult q = integrate(f, lo, hi, abs_tol * 0.01, rel_tol * 0.1);
    shell_values.push_back(q.value);
    sum += q.value;
    err += q.error;
    out.shells = j + 1;
    lo = hi;

    // Early exit: shell contribution negligible against target tolerance.
    const double tol = std::max(abs_tol, rel_tol * std::abs(sum));
    if (std::abs(q.value) < 0.01 * tol && j >= 2) {
      out.status = TailStatus::convergent;
      out.value = sum;
      out.error = err + std::abs(q.value);
      out.shell_slope = -100.0;  // decayed below resolution
      return out;
    }

    if (j >= 5) {
      // Fit log2 |shell| against shell index over the last six shells.
      std::vector<double> xs, ys;
      bool usable = true;
      for (int m = j - 5; m <= j; ++m) {
        const double v = std::abs(shell_values[m]);
        if (v <= 0.0) { usable = false; break; }
        xs.push_back(double(m));
        ys.push_back(std::log2(v));
      }
      if (usable) {
        LinearFit fit = fit_line(xs, ys);
        out.shell_slope = fit.slope;
        const bool stable = fit.slope_se < 0.02;
        if (stable && fit.slope < -0.10) {
          // Convergent: bound the remainder by a geometric series with the
          // *most pessimistic* recent ratio.
          double rho = 0.0;
          for (int m = j - 3; m < j; ++m) {
            const double a0 = std::abs(shell_values[m]);
            const double a1 = std::abs(shell_values[m + 1]);
            if (a0 > 0.0) rho = std::max(rho, a1 / a0);
          }
          if (rho < 0.999) {
            const double last = std::abs(shell_values[j]);
            const double remainder = last * rho / (1.0 - rho);
            // Continue summing shells while the remainder still matters.
            if (remainder < std::max(abs_tol, rel_tol * std::abs(sum))) {
              out.status = TailStatus::convergent;
              out.value = sum + remainder;  // signed tails: catalog integrands are >= 0
              out.error = err + remainder;
              return out;
            }
          }
        } else if (stable && fit.slope > -0.02) {
          out.status = TailStatus::divergent;
          out.value = sum;
          out.error = err;
          return out;
        }
      }
    }
  }
  out.status = TailStatus::indeterminate;
  out.value = sum;
  out.error = err;
  return out;
}

std::vector<double> rk45_solve(const OdeRhs& f, std::vector<double> y0,
                               double t0, double t1, double rel_tol,
                               double abs_tol) {
  // Dormand-Prince 5(4) coefficients.
  static const double A[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static const double B5[7] = {35.0 / 384,     0.0,          500.0 / 1113,
                               125.0 / 192,    -2187.0 / 6784, 11.0 / 84, 0.0};
  static const double B4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695,
                               393.0 / 640,     -92097.0 / 339200,
                               187.0 / 2100,    1.0 / 40};

  const std::size_t n = y0.size();
  if (t1 == t0) return y0;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(std::abs(t1 - t0), 1e-2);
  std::vector<std::vector<double>> k(7, std::vector<double>(n));
  std::vector<double> ytmp(n), y5(n), y4(n);
  int guard = 0;
  while (dir * (t1 - t) > 0.0 && ++guard < 2000000) {
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    f(t, y0, k[0]);
    for (int s = 1; s < 7; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += A[s][j] * k[j][i];
        ytmp[i] = y0[i] + h * acc;
      }
      f(t + C[s] * h, ytmp, k[s]);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc5 = 0.0, acc4 = 0.0;
      for (int s = 0; s < 7; ++s) {
        acc5 += B5[s] * k[s][i];
        acc4 += B4[s] * k[s][i];
      }
      y5[i] = y0[i] + h * acc5;
      y4[i] = y0[i] + h * acc4;
      const double sc = abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y5[i]));
      const double e = (y5[i] - y4[i]) / sc;
      err += e * e;
    }
    err = std::sqrt(err / double(n));
    if (err <= 1.0 || std::abs(h) < 1e-14 * std::abs(t1 - t0)) {
      t += h;
      y0 = y5;
    }
    const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
  }
  return y0;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matching points");
  const double n = double(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LinearFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    ss_res += r * r;
  }
  out.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  if (x.size() > 2)
    out.slope_se = std::sqrt(ss_res / (n - 2.0) / sxx);
  return out;
}

QuadraticFit fit_quadratic(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 4)
    throw std::invalid_argument("fit_quadratic: need >= 4 matching points");
  // Normal equations for the design matrix [1, x, x^2].
  double s[5] = {double(x.size()), 0, 0, 0, 0};
  double t[3] = {0, 0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    double xp = 1.0;
    t[0] += y[i];
    for (int p = 1; p <= 4; ++p) {
      xp *= x[i];
      s[p] += xp;
      if (p <= 2) t[p] += y[i] * xp;
    }
  }
  double m[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
  // Invert the symmetric 3x3 via adjugate.
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (std::abs(det) < 1e-300)
    throw std::invalid_argument("fit_quadratic: singular design");
  double inv[3][3];
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = inv[0][1];
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = inv[0][2];
  inv[2][1] = inv[1][2];
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  QuadraticFit out;
  out.c0 = inv[0][0] * t[0] + inv[0][1] * t[1] + inv[0][2] * t[2];
  out.c1 = inv[1][0] * t[0] + inv[1][1] * t[1] + inv[1][2] * t[2];
  out.c2 = inv[2][0] * t[0] + inv[2][1] * t[1] + inv[2][2] * t[2];
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (out.c0 + out.c1 * x[i] + out.c2 * x[i] * x[i]);
    ss_res += r * r;
  }
  const double sigma2 = ss_res / double(x.size() - 3);
  out.c1_se = std::sqrt(std::max(0.0, sigma2 * inv[1][1]));
  out.c2_se = std::sqrt(std::max(0.0, sigma2 * inv[2][2]));
  return out;
}

MeanVar mean_var(const std::vector<double>& xs) {
  MeanVar out;
  out.n = xs.size();
  if (xs.empty()) return out;
  double s = 0.0;
  for (double v : xs) s += v;
  out.mean = s / double(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double v : xs) ss += (v - out.mean) * (v - out.mean);
    out.var = ss / double(xs.size() - 1);
    out.se_mean = std::sqrt(out.var / double(xs.size()));
  }
  return out;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max(d, std::abs(F - double(i) / n));
    d = std::max(d, std::abs(double(i + 1) / n - F));
  }
  return d;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p outside (0,1)");
  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("sorted_quantile: empty");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  const double pos = q * double(sorted.size() - 1);
  const std::size_t lo = std::size_t(pos);
  const double fr = pos - double(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] * (1.0 - fr) + sorted[lo + 1] * fr;
}

}  // namespace spdelab
