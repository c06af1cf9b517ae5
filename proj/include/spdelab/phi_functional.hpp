#pragma once

#include <string>
#include <vector>

#include "spdelab/fundamental_solution.hpp"
#include "spdelab/spectral_measure.hpp"

namespace spdelab {

// The central variance functional
//   Phi(t) = int_0^t int |FG(s)(xi)|^2 mu(dxi) ds,
// which is the variance of the stochastic convolution with unit sigma and
// the yardstick every density bound in this project is measured against.

struct PhiResult {
  double value = 0.0;
  double error = 0.0;         //!< quadrature error estimate (0 for closed forms)
  std::string method;         //!< "closed-form" or "quadrature"
  bool flagged = false;       //!< quadrature failed to reach 1e-4 relative
};

//! Phi(t).  Preconditions: t >= 0 and mu admissible (the weighted integral
//! certificate is finite); throws std::domain_error otherwise.
PhiResult phi(const SpectralMeasure& mu, const FundamentalSolution& sol,
              double t);

//! Psi(t) = int_0^t G(s, R^d) ds, forwarded from the fundamental solution.
double psi(const FundamentalSolution& sol, double t);

struct PhiPoint {
  double t = 0.0;
  double phi = 0.0;
  double error = 0.0;
  bool flagged = false;
};

struct PhiProfile {
  std::vector<PhiPoint> points;
  std::string method;
};

//! Evaluate Phi on a time grid (points are independent; order preserved).
PhiProfile phi_profile(const SpectralMeasure& mu, const FundamentalSolution& sol,
                       const std::vector<double>& ts);

//! n log-spaced points from a to b inclusive (a, b > 0).
std::vector<double> log_spaced(double a, double b, int n);

struct GammaCertificate {
  bool valid = false;
  double gamma = 0.0;
  double constant = 0.0;           //!< largest C with Phi(t) >= C t^gamma on the grid
  double last_decade_slope = 0.0;  //!< d log(Phi/t^gamma) / d log t near t -> 0
  std::string reason;
};

//! Certify a small-time lower bound Phi(t) >= C t^gamma on (0, 1].  The
//! profile must hold >= 32 log-spaced points reaching down at least two
//! decades below t = 1.  The certificate is rejected when the ratio
//! Phi(t)/t^gamma trends to zero as t -> 0 (positive log-log slope over the
//! lowest decade): in that case no positive constant survives the limit and
//! the grid minimum would be an artifact of the truncation at t_min.
GammaCertificate certify_gamma(const PhiProfile& profile, double gamma);

}  // namespace spdelab
