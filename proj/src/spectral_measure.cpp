#include "spdelab/spectral_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spdelab {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("SpectralMeasure: dim must be 1, 2 or 3");
}

double norm_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

SpectralMeasure SpectralMeasure::white(int dim) {
  check_dim(dim);
  SpectralMeasure mu;
  mu.kind_ = Kind::white;
  mu.dim_ = dim;
  // density 1: the witness needs 2m - (d-1) > 1, i.e. m > d/2.
  mu.witness_ = dim / 2 + 1;
  mu.verify_witness();
  return mu;
}

SpectralMeasure SpectralMeasure::riesz(double beta, int dim) {
  check_dim(dim);
  if (!(beta > 0.0) || !(beta < double(dim)))
    throw std::invalid_argument(
        "SpectralMeasure::riesz: kernel |x|^{-beta} requires 0 < beta < dim");
  SpectralMeasure mu;
  mu.kind_ = Kind::riesz;
  mu.dim_ = dim;
  mu.beta_ = beta;
  mu.witness_ = int(beta / 2.0) + 1;
  mu.verify_witness();
  return mu;
}

SpectralMeasure SpectralMeasure::exponential(double length_scale, int dim) {
  check_dim(dim);
  if (!(length_scale > 0.0))
    throw std::invalid_argument("SpectralMeasure::exponential: need length_scale > 0");
  SpectralMeasure mu;
  mu.kind_ = Kind::exponential;
  mu.dim_ = dim;
  mu.length_scale_ = length_scale;
  mu.witness_ = 1;
  mu.verify_witness();
  return mu;
}

SpectralMeasure SpectralMeasure::atoms(std::vector<Atom> atoms, int dim) {
  check_dim(dim);
  if (atoms.empty()) throw std::invalid_argument("SpectralMeasure::atoms: empty list");
  for (const Atom& a : atoms) {
    if (int(a.point.size()) != dim)
      throw std::invalid_argument("SpectralMeasure::atoms: point dimension mismatch");
    if (!(a.mass > 0.0))
      throw std::invalid_argument("SpectralMeasure::atoms: masses must be positive");
    for (double c : a.point)
      if (!std::isfinite(c))
        throw std::invalid_argument("SpectralMeasure::atoms: non-finite point");
  }
  // Symmetry: every off-origin atom needs its mirror image with equal mass.
  const double tol = 1e-12;
  for (const Atom& a : atoms) {
    if (std::sqrt(norm_sq(a.point)) < tol) continue;
    bool matched = false;
    for (const Atom& b : atoms) {
      double diff = 0.0;
      for (int i = 0; i < dim; ++i) {
        const double d = a.point[i] + b.point[i];
        diff += d * d;
      }
      if (std::sqrt(diff) < tol && std::abs(a.mass - b.mass) < tol * (1.0 + a.mass)) {
        matched = true;
        break;
      }
    }
    if (!matched)
      throw std::invalid_argument(
          "SpectralMeasure::atoms: atoms must be symmetric (each +xi needs -xi "
          "with equal mass)");
  }
  SpectralMeasure mu;
  mu.kind_ = Kind::atoms;
  mu.dim_ = dim;
  mu.atoms_ = std::move(atoms);
  mu.witness_ = 1;
  mu.verify_witness();
  return mu;
}

void SpectralMeasure::verify_witness() {
  WeightedIntegral w = weighted_integral(*this, double(witness_));
  if (w.status != IntegralStatus::finite)
    throw std::logic_error("SpectralMeasure: temperedness witness failed to verify");
}

double SpectralMeasure::beta() const {
  if (kind_ != Kind::riesz) throw std::logic_error("beta(): not a riesz measure");
  return beta_;
}

double SpectralMeasure::length_scale() const {
  if (kind_ != Kind::exponential)
    throw std::logic_error("length_scale(): not an exponential measure");
  return length_scale_;
}

double SpectralMeasure::radial_density(double r) const {
  switch (kind_) {
    case Kind::white:
      return 1.0;
    case Kind::riesz:
      return std::pow(r, beta_ - double(dim_));
    case Kind::exponential: {
      // (2 pi l)^d c_d (1 + 4 pi^2 l^2 r^2)^{-(d+1)/2},
      // c_d = Gamma((d+1)/2) / pi^{(d+1)/2}
      const double l = length_scale_;
      const double cd = std::tgamma(0.5 * (dim_ + 1)) / std::pow(kPi, 0.5 * (dim_ + 1));
      const double denom = std::pow(1.0 + 4.0 * kPi * kPi * l * l * r * r,
                                    0.5 * (dim_ + 1));
      return std::pow(2.0 * kPi * l, double(dim_)) * cd / denom;
    }
    case Kind::atoms:
      throw std::logic_error("radial_density(): atomic measure has no density");
  }
  return 0.0;
}

std::string SpectralMeasure::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::white: os << "white(d=" << dim_ << ")"; break;
    case Kind::riesz: os << "riesz(beta=" << beta_ << ", d=" << dim_ << ")"; break;
    case Kind::exponential:
      os << "exponential(l=" << length_scale_ << ", d=" << dim_ << ")";
      break;
    case Kind::atoms: os << "atoms(" << atoms_.size() << ", d=" << dim_ << ")"; break;
  }
  return os.str();
}

WeightedIntegral weighted_integral(const SpectralMeasure& mu, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("weighted_integral: need m > 0");
  WeightedIntegral out;
  if (!mu.has_density()) {
    double s = 0.0;
    for (const Atom& a : mu.atom_list()) {
      double r2 = 0.0;
      for (double c : a.point) r2 += c * c;
      s += a.mass / std::pow(1.0 + r2, m);
    }
    out.status = IntegralStatus::finite;
    out.value = s;
    out.error = 0.0;
    out.tail_slope = -100.0;
    return out;
  }

  const int d = mu.dim();
  const double omega = surface_area(d);
  auto integrand = [&mu, d, m](double r) {
    return mu.radial_density(r) * std::pow(r, double(d - 1)) /
           std::pow(1.0 + r * r, m);
  };

  // Head [0, 1] with a substitution that flattens the possible algebraic
  // singularity at the origin, then dyadic shells on [1, infinity).
  QuadratureResult head = integrate_power_endpoint(integrand, 1.0, 1e-13, 1e-10);
  TailResult tail = integrate_dyadic_tail(integrand, 1.0, 1e-13, 1e-10);

  out.tail_slope = tail.shell_slope;
  switch (tail.status) {
    case TailStatus::divergent:
      out.status = IntegralStatus::infinite;
      return out;
    case TailStatus::indeterminate:
      out.status = IntegralStatus::indeterminate;
      return out;
    case TailStatus::convergent:
      break;
  }
  if (!head.converged) {
    out.status = IntegralStatus::indeterminate;
    return out;
  }
  out.status = IntegralStatus::finite;
  out.value = omega * (head.value + tail.value);
  out.error = omega * (head.error + tail.error);
  return out;
}

WeightedIntegral dalang_integral(const SpectralMeasure& mu, double eta) {
  if (!(eta > 0.0) || eta > 1.0)
    throw std::invalid_argument("dalang_integral: eta must lie in (0, 1]");
  return weighted_integral(mu, eta);
}

AdmissibilityReport is_admissible(const SpectralMeasure& mu) {
  AdmissibilityReport rep;
  rep.certificate = dalang_integral(mu, 1.0);
  rep.admissible = rep.certificate.status == IntegralStatus::finite;
  return rep;
}

double CovarianceKernel::pair_radial(const std::function<double(double)>& phi,
                                     double phi_at_zero) const {
  if (representation == Representation::dirac_at_zero)
    return dirac_mass * phi_at_zero;
  const double omega = surface_area(dim);
  const int d = dim;
  const auto& f = radial;
  auto integrand = [&phi, &f, d](double r) {
    return f(r) * phi(r) * std::pow(r, double(d - 1));
  };
  QuadratureResult head = integrate_power_endpoint(integrand, 1.0, 1e-13, 1e-10);
  TailResult tail = integrate_dyadic_tail(integrand, 1.0, 1e-13, 1e-10);
  if (tail.status != TailStatus::convergent || !head.converged)
    throw std::runtime_error("CovarianceKernel::pair_radial: quadrature failed");
  return omega * (head.value + tail.value);
}

CovarianceKernel kernel_of(const SpectralMeasure& mu) {
  CovarianceKernel k;
  k.dim = mu.dim();
  switch (mu.kind()) {
    case SpectralMeasure::Kind::white:
      k.representation = CovarianceKernel::Representation::dirac_at_zero;
      k.dirac_mass = 1.0;
      return k;
    case SpectralMeasure::Kind::riesz: {
      // f(x) = c_{d,beta} |x|^{-beta},
      // c_{d,beta} = pi^{d/2-beta} Gamma(beta/2) / Gamma((d-beta)/2)
      const double beta = mu.beta();
      const int d = mu.dim();
      const double c = std::pow(kPi, 0.5 * d - beta) * std::tgamma(0.5 * beta) /
                       std::tgamma(0.5 * (d - beta));
      k.representation = CovarianceKernel::Representation::radial_function;
      k.singular_at_origin = true;
      k.radial = [c, beta](double r) { return c * std::pow(r, -beta); };
      return k;
    }
    case SpectralMeasure::Kind::exponential: {
      const double l = mu.length_scale();
      k.representation = CovarianceKernel::Representation::radial_function;
      k.singular_at_origin = false;
      k.radial = [l](double r) { return std::exp(-r / l); };
      return k;
    }
    case SpectralMeasure::Kind::atoms: {
      // Only the pure origin atom transforms to a nonnegative density
      // (a constant); +-xi pairs transform to cosines, which fall outside
      // the nonnegative-kernel representation this type promises.
      const auto& atoms = mu.atom_list();
      double origin_mass = 0.0;
      for (const Atom& a : atoms) {
        double r2 = 0.0;
        for (double c : a.point) r2 += c * c;
        if (std::sqrt(r2) < 1e-12)
          origin_mass += a.mass;
        else
          throw std::invalid_argument(
              "kernel_of: off-origin atoms have no nonnegative kernel "
              "representation");
      }
      k.representation = CovarianceKernel::Representation::radial_function;
      k.singular_at_origin = false;
      k.radial = [origin_mass](double) { return origin_mass; };
      return k;
    }
  }
  throw std::logic_error("kernel_of: unreachable");
}

}  // namespace spdelab
