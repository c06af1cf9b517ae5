#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace spdelab {

inline constexpr double kPi = 3.14159265358979323846;

//! Surface area of the unit sphere S^{d-1} in R^d (2, 2*pi, 4*pi for d=1,2,3).
double surface_area(int dim);

// ---------------------------------------------------------------------------
// Adaptive quadrature (Gauss-Kronrod 7/15 with global interval refinement)
// ---------------------------------------------------------------------------

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;          //!< estimated absolute error
  std::size_t evaluations = 0; //!< integrand evaluations spent
  bool converged = false;      //!< error below requested tolerance
};

//! Integrate f over the finite interval [a, b].  The worst interval is split
//! until the summed error estimate drops below max(abs_tol, rel_tol*|I|) or
//! the interval budget is exhausted (converged=false in that case).
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-9,
                           std::size_t max_intervals = 4000);

//! Integrate f over [0, b] when f has an integrable algebraic singularity at
//! the origin (f ~ r^p with p > -1).  Uses the substitution r = s^4, which
//! turns r^p into s^{4p+3} and keeps the transformed exponent above -1 for
//! every p > -1, so the adaptive rule converges at ordinary rates.
QuadratureResult integrate_power_endpoint(const std::function<double(double)>& f,
                                          double b, double abs_tol = 1e-12,
                                          double rel_tol = 1e-9);

// ---------------------------------------------------------------------------
// Dyadic-shell tail analysis for integrals over [start, infinity)
// ---------------------------------------------------------------------------

enum class TailStatus { convergent, divergent, indeterminate };

struct TailResult {
  TailStatus status = TailStatus::indeterminate;
  double value = 0.0;       //!< shell sum plus geometric extrapolation (convergent only)
  double error = 0.0;       //!< extrapolation remainder bound plus quadrature error
  double shell_slope = 0.0; //!< fitted log2 decay rate of consecutive shells
  int shells = 0;
};

//! Integrate f over [start, infinity) by summing dyadic shells
//! [start*2^j, start*2^{j+1}].  The base-2 log of the shell values is fitted
//! against j; a clearly negative slope classifies the tail as convergent and
//! the remainder is bounded geometrically, a slope near zero or positive as
//! divergent (this is how a log-divergent integrand, slope -> 0, is caught).
//! Anything unstable within the shell budget is reported indeterminate.
TailResult integrate_dyadic_tail(const std::function<double(double)>& f,
                                 double start, double abs_tol = 1e-12,
                                 double rel_tol = 1e-9, int max_shells = 48);

// ---------------------------------------------------------------------------
// Embedded Runge-Kutta 5(4) (Dormand-Prince) for small ODE systems
// ---------------------------------------------------------------------------

using OdeRhs = std::function<void(double t, const std::vector<double>& y,
                                  std::vector<double>& dydt)>;

//! Integrate y' = f(t, y) from t0 to t1 with adaptive step control and return
//! y(t1).  Meant for low-dimensional verification work, not production runs.
std::vector<double> rk45_solve(const OdeRhs& f, std::vector<double> y0,
                               double t0, double t1, double rel_tol = 1e-11,
                               double abs_tol = 1e-13);

// ---------------------------------------------------------------------------
// Small statistics helpers
// ---------------------------------------------------------------------------

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0; //!< standard error of the slope (residual based)
  double r2 = 0.0;
};

//! Ordinary least squares line through (x, y); requires >= 3 points for a
//! meaningful slope_se.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct QuadraticFit {
  // y = c0 + c1 * x + c2 * x^2
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double c1_se = 0.0, c2_se = 0.0;
};

//! Least squares fit of a quadratic in x (normal equations, 3 parameters).
QuadraticFit fit_quadratic(const std::vector<double>& x,
                           const std::vector<double>& y);

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;     //!< unbiased sample variance
  double se_mean = 0.0; //!< standard error of the mean
  std::size_t n = 0;
};

MeanVar mean_var(const std::vector<double>& xs);

//! Two-sided Kolmogorov-Smirnov statistic of the sample against the given
//! continuous CDF.  The sample is copied and sorted internally.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

double normal_cdf(double z);
double normal_pdf(double z);

//! Inverse of the standard normal CDF (Acklam's rational approximation with a
//! Halley refinement step; accurate to ~1e-15 over (0,1)).
double normal_quantile(double p);

//! Quantile of a sorted sample by linear interpolation, q in [0,1].
double sorted_quantile(const std::vector<double>& sorted, double q);

}  // namespace spdelab
