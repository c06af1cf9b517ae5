#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "spdelab/numerics.hpp"
#include "spdelab/solver.hpp"

namespace spdelab {

// First-variation (derivative) kernel of the observable u(t_max, x_obs) with
// respect to the noise, on the same lattice and with the same one-step
// operators as the solver.  Row i holds the partial derivatives against the
// step-i increment field values:
//   rows[i][j] = d u(t_max, x_obs) / d dW_i(x_j),
// which is h^d times the continuum kernel D_{(t_i, x_j)} u.  The weighted
// spectral norm below reproduces the covariance inner product
//   |Du|^2_{a,e} = sum_{i: t_i in [a,e)} dt sum_k |rows_hat[i][k]|^2 mu_hat(k)
// with rows_hat the plain DFT of a row, so windows are exactly additive and
// the window past t_max is empty by adaptedness.

struct MalliavinKernel {
  GridSpec grid;
  std::size_t obs_node = 0;
  int source_begin = 0;  //!< first source step included
  std::vector<std::vector<double>> rows;       //!< [step - source_begin][node]
  std::vector<std::vector<Complex>> rows_hat;  //!< DFT of each row
  std::vector<double> step_norm;               //!< dt * weighted row power

  //! |Du|^2 over the time window [a, e): sums step_norm of sources with
  //! a <= t_i < e.  Throws if the window dips below source_begin * dt.
  double norm_sq(double a, double e) const;
  //! |Du|^2 over every included source step.
  double norm_sq_total() const;
};

//! Forward propagation of all source impulses through the linearised scheme.
//! `path` must have been solved with record_states and record_increments.
//! `source_begin` skips sources before that step (windows that start later
//! do not need them).  dim 1 only.
MalliavinKernel derivative_kernel(const SpdeSolver& solver,
                                  const SolvedPath& path, int source_begin = 0);

//! Covariance-weighted pairing <Du, h> for a direction given by physical
//! field values h[step][node].
double pair_with_direction(const MalliavinKernel& kernel,
                           const SpdeSolver& solver,
                           const std::vector<std::vector<double>>& h);

//! (u(shifted by eps in direction h) - u(base)) / eps, where the shift adds
//! eps * dt * mu_hat(k) * F(h_i)(k) to the step-i increment coefficients --
//! the Riesz representation of h in the covariance inner product, so this
//! finite difference converges to <Du, h> as eps -> 0.
double directional_difference(const SpdeSolver& solver, const SolvedPath& base,
                              const std::vector<std::vector<double>>& h,
                              double eps);

//! Deterministic pseudo-random smooth direction (low-frequency mix) for
//! duality tests; normalised to unit covariance norm.
std::vector<std::vector<double>> random_direction(const SpdeSolver& solver,
                                                  std::uint64_t tag);

struct WindowScalingReport {
  std::vector<double> deltas;
  std::vector<double> phi_deltas;    //!< continuum Phi(delta)
  std::vector<double> mean_norms;    //!< E |Du|^2 over [t-delta, t]
  std::vector<double> ses;
  LinearFit loglog;                  //!< log mean_norm against log phi_delta
};

//! Monte Carlo scaling of the window norm E|Du|^2_{[t-delta, t]} against
//! Phi(delta) at t = t_max.  Needs >= 100 paths for the regression to be
//! meaningful; deltas must be positive, increasing and < t_max.
WindowScalingReport window_scaling(const SpdeSolver& solver,
                                   const std::vector<double>& deltas,
                                   std::size_t n_paths, int threads = 1);

struct NegativeMomentReport {
  std::vector<double> ts;
  std::vector<double> phi_ts;
  std::vector<double> mean_inv_norms;  //!< E [ |Du|^{-2} ]
  std::vector<double> products;        //!< E[|Du|^{-2}] * Phi(t)
  double max_min_ratio = 0.0;
};

//! E|Du|^{-2} across separate horizons t (fresh lattice per t with the same
//! node/step counts), multiplied by Phi(t); flat products support the
//! inverse-moment bound E|Du|^{-2} <= C / Phi(t).
NegativeMomentReport negative_moment_survey(
    const SpectralMeasure& mu, const FundamentalSolution& sol,
    const CoefficientPair& coeffs, const InitialData& init,
    const std::vector<double>& obs_point, const GridSpec& base,
    const std::vector<double>& ts, std::size_t n_paths, std::uint64_t seed,
    int threads = 1);

}  // namespace spdelab
