#include "spdelab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spdelab {

Coefficient Coefficient::constant(double c) {
  Coefficient f;
  f.kind = Kind::constant;
  f.p0 = c;
  return f;
}

Coefficient Coefficient::sine(double a0, double a1, double phase) {
  Coefficient f;
  f.kind = Kind::sine;
  f.p0 = a0;
  f.p1 = a1;
  f.p2 = phase;
  return f;
}

Coefficient Coefficient::clamped_affine(double slope, double intercept,
                                        double bound) {
  if (!(bound > 0.0))
    throw std::invalid_argument("clamped_affine: bound must be > 0");
  Coefficient f;
  f.kind = Kind::clamped_affine;
  f.p0 = slope;
  f.p1 = intercept;
  f.p2 = bound;
  return f;
}

double Coefficient::operator()(double z) const {
  switch (kind) {
    case Kind::constant: return p0;
    case Kind::sine: return p0 + p1 * std::sin(z + p2);
    case Kind::clamped_affine: return std::clamp(p0 * z + p1, -p2, p2);
  }
  return 0.0;
}

double Coefficient::deriv(double z) const {
  switch (kind) {
    case Kind::constant: return 0.0;
    case Kind::sine: return p1 * std::cos(z + p2);
    case Kind::clamped_affine: {
      const double y = p0 * z + p1;
      return (y > -p2 && y < p2) ? p0 : 0.0;
    }
  }
  return 0.0;
}

double Coefficient::sup() const {
  switch (kind) {
    case Kind::constant: return std::abs(p0);
    case Kind::sine: return std::abs(p0) + std::abs(p1);
    case Kind::clamped_affine:
      return p0 == 0.0 ? std::min(std::abs(p1), p2) : p2;
  }
  return 0.0;
}

double Coefficient::deriv_sup() const {
  switch (kind) {
    case Kind::constant: return 0.0;
    case Kind::sine: return std::abs(p1);
    case Kind::clamped_affine: return std::abs(p0);
  }
  return 0.0;
}

double Coefficient::lower() const {
  switch (kind) {
    case Kind::constant: return std::abs(p0);
    case Kind::sine: return std::max(0.0, std::abs(p0) - std::abs(p1));
    case Kind::clamped_affine: {
      if (p0 == 0.0) return std::min(std::abs(p1), p2);
      return 0.0;  // an affine with nonzero slope crosses zero before clamping
    }
  }
  return 0.0;
}

std::string Coefficient::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::constant: os << "constant(" << p0 << ")"; break;
    case Kind::sine: os << "sine(" << p0 << "," << p1 << "," << p2 << ")"; break;
    case Kind::clamped_affine:
      os << "clamped_affine(" << p0 << "," << p1 << "," << p2 << ")";
      break;
  }
  return os.str();
}

InitialProfile InitialProfile::zero() { return InitialProfile{}; }

InitialProfile InitialProfile::constant(double c) {
  InitialProfile p;
  p.kind = Kind::constant;
  p.p0 = c;
  return p;
}

InitialProfile InitialProfile::mode(int k, double amp) {
  InitialProfile p;
  p.kind = Kind::mode;
  p.p0 = double(k);
  p.p1 = amp;
  return p;
}

InitialProfile InitialProfile::bump(double radius, double amp) {
  if (!(radius > 0.0)) throw std::invalid_argument("bump: radius must be > 0");
  InitialProfile p;
  p.kind = Kind::bump;
  p.p0 = radius;
  p.p1 = amp;
  return p;
}

std::vector<double> InitialProfile::sample(const GridSpec& grid) const {
  std::vector<double> out(grid.total_modes(), 0.0);
  switch (kind) {
    case Kind::zero: break;
    case Kind::constant:
      std::fill(out.begin(), out.end(), p0);
      break;
    case Kind::mode: {
      const double k = p0;
      for (std::size_t j = 0; j < out.size(); ++j) {
        double x[2];
        grid.node_point(j, x);
        out[j] = p1 * std::cos(2.0 * 3.14159265358979323846 * k * x[0] / grid.length);
      }
      break;
    }
    case Kind::bump: {
      const double c = 0.5 * grid.length;
      for (std::size_t j = 0; j < out.size(); ++j) {
        double x[2];
        grid.node_point(j, x);
        double r2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
          double d = std::abs(x[a] - c);
          d = std::min(d, grid.length - d);  // torus distance
          r2 += d * d;
        }
        const double q = r2 / (p0 * p0);
        out[j] = q < 1.0 ? p1 * std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
      }
      break;
    }
  }
  return out;
}

std::string InitialProfile::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::zero: os << "zero"; break;
    case Kind::constant: os << "constant(" << p0 << ")"; break;
    case Kind::mode: os << "mode(" << int(p0) << "," << p1 << ")"; break;
    case Kind::bump: os << "bump(" << p0 << "," << p1 << ")"; break;
  }
  return os.str();
}

}  // namespace spdelab
