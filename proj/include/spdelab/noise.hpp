#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "spdelab/fft.hpp"
#include "spdelab/fundamental_solution.hpp"
#include "spdelab/grid.hpp"
#include "spdelab/spectral_measure.hpp"

namespace spdelab {

//! Per-mode mass assigned to the lattice frequencies xi_k = k / L:
//! density kinds get density(xi_k) * L^{-d} (the Fourier cell volume), with
//! the singular riesz origin cell replaced by its exact equal-volume-ball
//! average; atomic measures snap each atom to the nearest lattice frequency
//! (magnitude-clamped inside the band so +-xi pairs stay symmetric).
class ModeWeights {
 public:
  ModeWeights(const GridSpec& grid, const SpectralMeasure& mu);

  const std::vector<double>& weights() const { return w_; }
  double weight(std::size_t idx) const { return w_[idx]; }
  double total() const { return total_; }

 private:
  std::vector<double> w_;
  double total_ = 0.0;
};

//! Spectral synthesis of the driving noise increments.  The increment over
//! time step `step` of path `path` is the real field
//!   dW(x_j) = sum_k What_k e^{2 pi i k.j / n},
//! where the coefficients are independent complex Gaussians with
//! E|What_k|^2 = dt * mu_hat(k), Hermitian-paired so the field is real.
//! Every coefficient is a pure function of (seed, path, step, mode), so any
//! increment can be regenerated in isolation and results do not depend on
//! thread count or evaluation order.
class NoiseGenerator {
 public:
  NoiseGenerator(const GridSpec& grid, const SpectralMeasure& mu,
                 std::uint64_t seed);

  //! Fill `out` (resized to total_modes) with the coefficients of one step.
  void step_coefficients(std::uint64_t path, std::uint32_t step,
                         std::vector<Complex>& out) const;

  const GridSpec& grid() const { return grid_; }
  const ModeWeights& mode_weights() const { return weights_; }
  std::uint64_t seed() const { return seed_; }

 private:
  GridSpec grid_;
  ModeWeights weights_;
  std::uint64_t seed_;
  // canonical pair list: (idx, conj_idx, amplitude); idx == conj for the
  // self-conjugate (real) coefficients
  struct Pair {
    std::uint32_t idx, conj;
    double amp;
  };
  std::vector<Pair> pairs_;
};

//! Sum_k mu_hat(k) int_0^t |FG(s)(xi_k)|^2 ds: the exact variance the lattice
//! scheme aims at (continuum Phi minus the mass outside the frequency band).
double truncated_phi(const GridSpec& grid, const SpectralMeasure& mu,
                     const FundamentalSolution& sol, double t);

//! Relative variance mass missed by the frequency band at time t:
//! 1 - truncated_phi / Phi.  Reported in run manifests.
double truncation_gap(const GridSpec& grid, const SpectralMeasure& mu,
                      const FundamentalSolution& sol, double t);

//! All increments of one path held in memory (small grids / diagnostics).
struct NoiseIncrements {
  GridSpec grid;
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  std::vector<std::vector<Complex>> coeffs;  //!< [step][mode]
};

NoiseIncrements sample_increments(const GridSpec& grid, const SpectralMeasure& mu,
                                  std::uint64_t seed, std::uint64_t path = 0);

//! Binary cache of one path's increments.  Layout (little endian):
//! magic "SPDN", u32 version, u32 dim, u32 modes, u32 steps, f64 length,
//! f64 t_max, u64 seed, u64 path, then steps * total_modes complex<double>.
void write_noise_cache(const std::string& file, const NoiseIncrements& inc);
NoiseIncrements read_noise_cache(const std::string& file);

//! Empirical check of the increment covariance against its exact lattice
//! form for a small panel of spatial profiles: identical, disjoint and
//! translated supports, plus a disjoint-time-window product.  Each entry
//! compares the mean of n_steps independent step products with the predicted
//! covariance and reports the deviation in standard errors.
struct CovarianceCheck {
  std::string label;
  double predicted = 0.0;
  double empirical = 0.0;
  double z_score = 0.0;
};

std::vector<CovarianceCheck> pair_correlation_test(const GridSpec& grid,
                                                   const SpectralMeasure& mu,
                                                   std::uint64_t seed,
                                                   int n_steps = 2000);

}  // namespace spdelab
