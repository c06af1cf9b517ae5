#pragma once

#include <cstddef>
#include <vector>

#include "spdelab/numerics.hpp"

namespace spdelab {

//! Histogram density estimate with per-bin sampling error.  Bin width is
//! chosen from the data spread (Silverman-style reference rule times a user
//! factor decides the padding; the bin count fixes the resolution), and the
//! per-bin 95% halfwidth uses the Poisson error of the count:
//!   p_hat = count / (n w),  ci = 1.96 sqrt(count) / (n w).
//! A zero-count bin therefore has a zero lower edge and can never produce a
//! spurious violation of an upper bound.
struct DensityEstimate {
  std::vector<double> z;          //!< bin centres
  std::vector<double> p_hat;      //!< count / (n w)
  std::vector<double> ci;         //!< 95% halfwidth, 1.96 sqrt(count) / (n w)
  std::vector<std::size_t> counts;
  double bin_width = 0.0;
  double bandwidth = 0.0;  //!< reference-rule scale used for grid padding
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  bool degenerate = false;  //!< all samples equal; only z[0] and counts[0] valid
};

//! Estimate the density of `samples` on `bins` equal-width bins covering
//! [min - 4 bw, max + 4 bw], bw the Silverman reference scale
//! 0.9 min(sd, IQR/1.34) n^{-1/5} times `bw_factor`.  bins >= 64 enforced.
DensityEstimate estimate_density(const std::vector<double>& samples,
                                 std::size_t bins = 128,
                                 double bw_factor = 1.0);

//! Gaussian-shaped upper envelope
//!   B(z) = c1 phi^{-1/2} exp( -max(0, |z - center| - offset)^2 / (c2 phi) ).
struct EnvelopeParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double offset = 0.0;  //!< drift allowance subtracted from |z - center|
  double center = 0.0;  //!< deterministic part of the observable
  double phi = 0.0;     //!< variance scale of the comparison Gaussian
};

double envelope_value(const EnvelopeParams& p, double z);

struct EnvelopeCheck {
  std::size_t violations = 0;  //!< bins whose CI lower edge exceeds the bound
  double max_ratio = 0.0;      //!< max over bins of (p_hat - ci)+ / bound
  bool pass = false;
};

//! Check B(z) >= max(0, p_hat - ci) on every bin.
EnvelopeCheck verify_envelope(const DensityEstimate& est,
                              const EnvelopeParams& p);

struct EnvelopeFit {
  EnvelopeParams params;
  bool feasible = false;
  double c2_unsnapped = 0.0;  //!< exact minimal c2 at the chosen c1
};

//! Smallest constants that make the envelope dominate the estimate:
//! lexicographically minimal (c1, c2) over log grids c1 in [1e-3, 1e3] and
//! c2 in [0.1, 100] (96 points per decade).  For a Gaussian sample with
//! variance phi and the matching center, the fit converges to
//! c1 = (2 pi)^{-1/2}, c2 = 2.
EnvelopeFit fit_envelope(const DensityEstimate& est, double phi, double center,
                         double offset);

//! Two-sided comparison against the Gaussian shape with fixed rate:
//!   C(z) = p_hat(z) sqrt(phi) exp( (z - center)^2 / (2 phi) ),
//! constant (2 pi)^{-1/2} for an exact Gaussian.  Computed over bins with
//! count >= 10 inside |z - center| <= 3 sqrt(phi); passes when the spread
//! C_max / C_min stays below `ratio_limit`.
struct TwoSidedCheck {
  double c_min = 0.0;
  double c_max = 0.0;
  double ratio = 0.0;
  std::size_t bins_used = 0;
  bool pass = false;
};

TwoSidedCheck two_sided_check(const DensityEstimate& est, double phi,
                              double center, double ratio_limit = 4.0);

//! Log-density decay against the squared distance x = (z - center)^2 on the
//! tail bins (count >= 10 and |z - center| >= 2 sqrt(phi)).
//!   log p_hat = a0 - decay * x          (line)
//!   log p_hat = q0 + q1 x + q2 x^2      (curvature probe)
//! Gaussian-type decay means `decay` positive with its CI clear of zero and
//! no significant positive curvature; a heavy tail (for example Cauchy)
//! flattens in x, which surfaces as q2 > 3 se -- `nonquadratic`.
struct TailDecayFit {
  double decay = 0.0;
  double decay_se = 0.0;
  bool decay_positive = false;  //!< decay - 1.96 se > 0
  double curvature = 0.0;
  double curvature_se = 0.0;
  bool nonquadratic = false;  //!< curvature > 3 se
  std::size_t bins_used = 0;
  bool enough_bins = false;  //!< >= 8 tail bins entered the fits
};

TailDecayFit tail_decay_fit(const DensityEstimate& est, double phi,
                            double center);

//! Kolmogorov-Smirnov distance of `samples` to N(mean, variance).
double ks_against_normal(const std::vector<double>& samples, double mean,
                         double variance);

}  // namespace spdelab
