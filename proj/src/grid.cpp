#include "spdelab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace spdelab {

void GridSpec::signed_modes(std::size_t idx, int* out) const {
  const std::size_t n = std::size_t(modes);
  for (int a = dim - 1; a >= 0; --a) {
    const int raw = int(idx % n);
    out[a] = raw < modes / 2 ? raw : raw - modes;
    idx /= n;
  }
}

double GridSpec::mode_radius(std::size_t idx) const {
  int k[2] = {0, 0};
  signed_modes(idx, k);
  double s = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double xi = double(k[a]) / length;
    s += xi * xi;
  }
  return std::sqrt(s);
}

std::size_t GridSpec::conj_index(std::size_t idx) const {
  const std::size_t n = std::size_t(modes);
  std::size_t out = 0;
  std::size_t rem = idx;
  std::size_t stride[2] = {1, 1};
  if (dim == 2) stride[0] = n;
  // negate each axis index modulo n
  if (dim == 1) {
    const std::size_t a = rem;
    return a == 0 ? 0 : n - a;
  }
  const std::size_t a0 = rem / n;
  const std::size_t a1 = rem % n;
  const std::size_t b0 = a0 == 0 ? 0 : n - a0;
  const std::size_t b1 = a1 == 0 ? 0 : n - a1;
  out = b0 * n + b1;
  (void)stride;
  return out;
}

void GridSpec::node_point(std::size_t j, double* out) const {
  const std::size_t n = std::size_t(modes);
  const double step = h();
  if (dim == 1) {
    out[0] = double(j) * step;
    return;
  }
  out[0] = double(j / n) * step;
  out[1] = double(j % n) * step;
}

std::size_t GridSpec::node_index(const std::vector<double>& x) const {
  if (int(x.size()) != dim)
    throw std::invalid_argument("node_index: point dimension mismatch");
  const double step = h();
  std::size_t idx = 0;
  for (int a = 0; a < dim; ++a) {
    double c = std::fmod(x[a], length);
    if (c < 0.0) c += length;
    const double pos = c / step;
    const long j = std::lround(pos);
    if (std::abs(pos - double(j)) > 1e-9)
      throw std::invalid_argument(
          "node_index: point does not lie on the lattice");
    idx = idx * std::size_t(modes) + std::size_t(j % modes);
  }
  return idx;
}

void GridSpec::validate() const {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("GridSpec: dim must be 1 or 2");
  if (!(length > 0.0)) throw std::invalid_argument("GridSpec: length <= 0");
  if (modes < 8 || modes % 2 != 0)
    throw std::invalid_argument("GridSpec: modes must be even and >= 8");
  if (!(t_max > 0.0)) throw std::invalid_argument("GridSpec: t_max <= 0");
  if (steps < 1) throw std::invalid_argument("GridSpec: steps < 1");
}

}  // namespace spdelab
