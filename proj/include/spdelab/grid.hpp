#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spdelab {

//! Periodic space-time lattice: a torus of side `length` with `modes` nodes
//! per axis (dim 1 or 2) and `steps` uniform time steps on [0, t_max].
//!
//! Fourier layout follows the usual DFT convention: axis index a in [0, n)
//! carries the signed integer mode k = a for a < n/2 and k = a - n otherwise,
//! i.e. continuum frequency xi = k / length.  Index 0 and the Nyquist index
//! n/2 are their own conjugates.
struct GridSpec {
  int dim = 1;
  double length = 1.0;
  int modes = 64;
  double t_max = 1.0;
  int steps = 64;

  double dt() const { return t_max / steps; }
  double h() const { return length / modes; }
  std::size_t total_modes() const {
    std::size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= std::size_t(modes);
    return n;
  }

  //! Signed integer mode numbers (k_1, ..., k_d) of a linear index.
  void signed_modes(std::size_t idx, int* out) const;

  //! |xi| of a linear index: sqrt(sum (k_i / length)^2).
  double mode_radius(std::size_t idx) const;

  //! Linear index of the complex-conjugate partner (negated mode numbers).
  std::size_t conj_index(std::size_t idx) const;

  //! Physical coordinates of node j (row major for dim 2).
  void node_point(std::size_t j, double* out) const;

  //! Linear node index of a physical point; the point must sit on the grid
  //! (within 1e-9 * h), otherwise throws.
  std::size_t node_index(const std::vector<double>& x) const;

  //! Throws std::invalid_argument when any field is out of range.
  void validate() const;
};

}  // namespace spdelab
