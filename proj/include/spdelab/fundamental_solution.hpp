#pragma once

#include <string>

namespace spdelab {

//! Fundamental solutions of the operator catalog, represented through their
//! spatial Fourier transform at radial frequency r = |xi| (the symbols are
//! radial for every catalog member):
//!
//!   heat         d_t - Laplace           FG(t)(xi) = exp(-4 pi^2 t r^2)
//!   wave         d_tt - Laplace          FG(t)(xi) = sin(2 pi t r) / (2 pi r)
//!   damped_wave  d_tt + d_t - Laplace    FG(t)(xi) solves y'' + y' + (2 pi r)^2 y = 0,
//!                                        y(0) = 0, y'(0) = 1
//!
//! The Fourier convention is F(phi)(xi) = int e^{-2 pi i xi.x} phi(x) dx, so
//! plane-wave frequency k on a length-L torus sits at xi = k / L and white
//! noise has spectral density exactly 1.
class FundamentalSolution {
 public:
  enum class Kind { heat, wave, damped_wave };

  FundamentalSolution(Kind kind, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::string describe() const;

  //! FG(t)(xi) at radial frequency r >= 0, t >= 0.
  double fourier_transform(double t, double r) const;

  //! Time derivative d/dt FG(t)(xi) (the second component of the wave-type
  //! propagator pair; equals the heat symbol's own derivative for heat).
  double dt_fourier_transform(double t, double r) const;

  //! int_0^t FG(s)(xi) ds, closed form for every catalog member.
  double time_integral(double t, double r) const;

  //! int_0^t FG(s)(xi)^2 ds, closed form away from the damped-wave critical
  //! radius, quadrature fallback in a narrow band around it.
  double time_integral_sq(double t, double r) const;

  //! G(t, R^d) = FG(t)(0): 1 for heat, t for wave, 1 - e^{-t} for damped.
  double total_mass(double t) const;

  //! sup_{0 <= s <= t} G(s, R^d); multiplies the drift bound constant.
  double sup_total_mass(double t) const;

  //! Psi(t) = int_0^t G(s, R^d) ds: t, t^2/2, t - 1 + e^{-t}.
  double psi(double t) const;

  //! Pointwise kernel density G(t, x) at radius |x|: heat for d <= 3, wave
  //! for d <= 2.  Throws where the kernel is not an L^1 density with a
  //! pointwise formula (wave d = 3, damped_wave).
  double real_kernel(double t, double radius) const;

  //! Reference value of FG(t)(xi) from direct adaptive ODE integration of the
  //! defining mode equation; slow, used to cross-check the closed forms.
  double mode_ode_reference(double t, double r, double rel_tol = 1e-12) const;

 private:
  Kind kind_;
  int dim_;
};

}  // namespace spdelab
