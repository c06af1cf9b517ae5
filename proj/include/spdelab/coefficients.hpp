#pragma once

#include <string>
#include <vector>

#include "spdelab/grid.hpp"

namespace spdelab {

//! Scalar coefficient catalog for sigma and b.  Every member is globally
//! Lipschitz and bounded with explicit constants, which the moment and
//! density machinery relies on:
//!
//!   constant(c)                f(z) = c
//!   sine(a0, a1, phase)        f(z) = a0 + a1 sin(z + phase)
//!   clamped_affine(s, c, M)    f(z) = clamp(s z + c, -M, M)
//!
//! A pure cosine is sine(0, a, pi/2).
struct Coefficient {
  enum class Kind { constant, sine, clamped_affine };

  static Coefficient constant(double c);
  static Coefficient sine(double a0, double a1, double phase);
  static Coefficient clamped_affine(double slope, double intercept, double bound);

  double operator()(double z) const;
  double deriv(double z) const;

  double sup() const;        //!< sup_z |f(z)|
  double deriv_sup() const;  //!< Lipschitz constant sup_z |f'(z)|
  double lower() const;      //!< inf_z |f(z)| (0 when f crosses zero)

  bool is_zero() const { return kind == Kind::constant && p0 == 0.0; }
  bool is_constant_fn() const { return kind == Kind::constant || deriv_sup() == 0.0; }

  std::string describe() const;

  Kind kind = Kind::constant;
  double p0 = 0.0, p1 = 0.0, p2 = 0.0;
};

struct CoefficientPair {
  Coefficient sigma = Coefficient::constant(1.0);
  Coefficient b = Coefficient::constant(0.0);
};

//! Deterministic initial profiles sampled on the lattice:
//!   zero
//!   constant(c)
//!   mode(k, amp)      amp * cos(2 pi k x_1 / L), integer k
//!   bump(radius, amp) C-infinity bump of the given radius centred at L/2
struct InitialProfile {
  enum class Kind { zero, constant, mode, bump };

  static InitialProfile zero();
  static InitialProfile constant(double c);
  static InitialProfile mode(int k, double amp);
  static InitialProfile bump(double radius, double amp);

  std::vector<double> sample(const GridSpec& grid) const;
  bool is_zero() const { return kind == Kind::zero; }
  std::string describe() const;

  Kind kind = Kind::zero;
  double p0 = 0.0, p1 = 0.0;
};

struct InitialData {
  InitialProfile u0 = InitialProfile::zero();
  InitialProfile v0 = InitialProfile::zero();  //!< wave-type operators only
};

}  // namespace spdelab
