#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spdelab/numerics.hpp"

namespace spdelab {

//! One Fourier-space atom: a point mass at `point` (length = dim).
struct Atom {
  std::vector<double> point;
  double mass = 0.0;
};

//! Spatial correlation of the driving noise, described on the Fourier side.
//!
//! Catalog:
//!   white        - Lebesgue measure (density 1); space-time white noise.
//!   riesz(beta)  - density |xi|^{beta-d}, the transform of the kernel
//!                  c_{d,beta} |x|^{-beta}; requires 0 < beta < d so the
//!                  kernel is locally integrable.
//!   exponential(l) - transform of the kernel e^{-|x|/l}; density
//!                  (2 pi l)^d c_d (1 + 4 pi^2 l^2 |xi|^2)^{-(d+1)/2}.
//!   atoms        - finite sum of symmetric point masses.
//!
//! All constructors enforce nonnegativity and symmetry and verify a
//! temperedness witness numerically: an exponent m with
//! int (1+|xi|^2)^{-m} mu(dxi) < infinity.
class SpectralMeasure {
 public:
  enum class Kind { white, riesz, exponential, atoms };

  static SpectralMeasure white(int dim);
  static SpectralMeasure riesz(double beta, int dim);
  static SpectralMeasure exponential(double length_scale, int dim);
  static SpectralMeasure atoms(std::vector<Atom> atoms, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double beta() const;
  double length_scale() const;
  const std::vector<Atom>& atom_list() const { return atoms_; }

  bool has_density() const { return kind_ != Kind::atoms; }

  //! Radial density m(r) with r = |xi|, for the absolutely continuous kinds.
  double radial_density(double r) const;

  //! Verified exponent m for the temperedness witness.
  int tempered_witness() const { return witness_; }

  std::string describe() const;

 private:
  SpectralMeasure() = default;
  void verify_witness();

  Kind kind_ = Kind::white;
  int dim_ = 1;
  double beta_ = 0.0;
  double length_scale_ = 0.0;
  std::vector<Atom> atoms_;
  int witness_ = 1;
};

enum class IntegralStatus { finite, infinite, indeterminate };

struct WeightedIntegral {
  IntegralStatus status = IntegralStatus::indeterminate;
  double value = 0.0;  //!< meaningful when status == finite
  double error = 0.0;
  double tail_slope = 0.0;  //!< dyadic shell decay diagnostic
};

//! int (1 + |xi|^2)^{-eta} mu(dxi) for eta in (0, 1].  eta = 1 is the
//! screening weight whose finiteness characterises solvability for the
//! operators in this catalog.
WeightedIntegral dalang_integral(const SpectralMeasure& mu, double eta = 1.0);

//! Same integral for arbitrary weight exponent m >= 1 (used internally for
//! the temperedness witness; no range restriction on m).
WeightedIntegral weighted_integral(const SpectralMeasure& mu, double m);

struct AdmissibilityReport {
  bool admissible = false;
  WeightedIntegral certificate;
};

//! A measure is admissible when the eta = 1 weighted integral is finite.
AdmissibilityReport is_admissible(const SpectralMeasure& mu);

//! Physical-space representation of the correlation Lambda = F(mu).
struct CovarianceKernel {
  enum class Representation { dirac_at_zero, radial_function };
  Representation representation = Representation::radial_function;
  int dim = 1;
  bool singular_at_origin = false;
  double dirac_mass = 0.0;                 //!< dirac_at_zero only
  std::function<double(double)> radial;    //!< radial_function only, f(|x|)

  //! Pair kernel against a radial test function: int f(|x|) phi(|x|) dx for
  //! the function representation, mass * phi(0) for the Dirac.
  double pair_radial(const std::function<double(double)>& phi,
                     double phi_at_zero) const;
};

//! Closed-form physical kernel for the catalog entries that admit a
//! nonnegative density (riesz, exponential, single atom at the origin) or a
//! point mass (white).  Throws for off-origin atoms, whose transform is an
//! oscillating sign-changing object outside this representation.
CovarianceKernel kernel_of(const SpectralMeasure& mu);

}  // namespace spdelab
