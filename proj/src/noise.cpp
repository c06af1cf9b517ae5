#include "spdelab/noise.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "spdelab/numerics.hpp"
#include "spdelab/phi_functional.hpp"
#include "spdelab/rng.hpp"

namespace spdelab {

ModeWeights::ModeWeights(const GridSpec& grid, const SpectralMeasure& mu) {
  grid.validate();
  if (mu.dim() != grid.dim)
    throw std::invalid_argument("ModeWeights: measure/grid dimension mismatch");
  const std::size_t total = grid.total_modes();
  w_.assign(total, 0.0);
  const int d = grid.dim;
  const double cell = std::pow(grid.length, -double(d));

  if (mu.has_density()) {
    for (std::size_t idx = 0; idx < total; ++idx) {
      const double r = grid.mode_radius(idx);
      if (idx == 0 && mu.kind() == SpectralMeasure::Kind::riesz) {
        // Exact mass of the riesz density over a ball of the cell's volume:
        // omega_{d-1} rho^beta / beta with V_d rho^d = L^{-d}.
        const double beta = mu.beta();
        const double vd = std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
        const double rho = std::pow(cell / vd, 1.0 / double(d));
        w_[idx] = surface_area(d) * std::pow(rho, beta) / beta;
      } else {
        w_[idx] = mu.radial_density(r) * cell;
      }
    }
  } else {
    const int half = grid.modes / 2;
    for (const Atom& a : mu.atom_list()) {
      std::size_t idx = 0;
      for (int ax = 0; ax < d; ++ax) {
        long k = std::lround(a.point[ax] * grid.length);
        // clamp by magnitude so +-xi pairs land on conjugate lattice sites
        if (k > half - 1) k = half - 1;
        if (k < -(half - 1)) k = -(half - 1);
        const std::size_t raw = std::size_t(k >= 0 ? k : k + grid.modes);
        idx = idx * std::size_t(grid.modes) + raw;
      }
      w_[idx] += a.mass;
    }
  }
  total_ = 0.0;
  for (double v : w_) total_ += v;
}

NoiseGenerator::NoiseGenerator(const GridSpec& grid, const SpectralMeasure& mu,
                               std::uint64_t seed)
    : grid_(grid), weights_(grid, mu), seed_(seed) {
  const std::size_t total = grid_.total_modes();
  const double dt = grid_.dt();
  pairs_.reserve(total / 2 + 2);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const std::size_t conj = grid_.conj_index(idx);
    if (conj < idx) continue;  // handled by the canonical representative
    const double v = dt * weights_.weight(idx);
    Pair p;
    p.idx = std::uint32_t(idx);
    p.conj = std::uint32_t(conj);
    p.amp = idx == conj ? std::sqrt(v) : std::sqrt(0.5 * v);
    pairs_.push_back(p);
  }
}

void NoiseGenerator::step_coefficients(std::uint64_t path, std::uint32_t step,
                                       std::vector<Complex>& out) const {
  out.assign(grid_.total_modes(), Complex(0.0, 0.0));
  for (const Pair& p : pairs_) {
    if (p.amp == 0.0) continue;
    const auto z = normal_pair(seed_, path, step, p.idx, /*purpose=*/0);
    if (p.idx == p.conj) {
      out[p.idx] = Complex(p.amp * z[0], 0.0);
    } else {
      const Complex w(p.amp * z[0], p.amp * z[1]);
      out[p.idx] = w;
      out[p.conj] = std::conj(w);
    }
  }
}

double truncated_phi(const GridSpec& grid, const SpectralMeasure& mu,
                     const FundamentalSolution& sol, double t) {
  ModeWeights weights(grid, mu);
  double s = 0.0;
  for (std::size_t idx = 0; idx < grid.total_modes(); ++idx) {
    const double w = weights.weight(idx);
    if (w == 0.0) continue;
    s += w * sol.time_integral_sq(t, grid.mode_radius(idx));
  }
  return s;
}

double truncation_gap(const GridSpec& grid, const SpectralMeasure& mu,
                      const FundamentalSolution& sol, double t) {
  const double full = phi(mu, sol, t).value;
  if (full <= 0.0) return 0.0;
  return 1.0 - truncated_phi(grid, mu, sol, t) / full;
}

NoiseIncrements sample_increments(const GridSpec& grid, const SpectralMeasure& mu,
                                  std::uint64_t seed, std::uint64_t path) {
  NoiseGenerator gen(grid, mu, seed);
  NoiseIncrements inc;
  inc.grid = grid;
  inc.seed = seed;
  inc.path = path;
  inc.coeffs.resize(grid.steps);
  for (int s = 0; s < grid.steps; ++s)
    gen.step_coefficients(path, std::uint32_t(s), inc.coeffs[s]);
  return inc;
}

namespace {

template <typename T>
void put(std::FILE* f, const T& v) {
  if (std::fwrite(&v, sizeof(T), 1, f) != 1)
    throw std::runtime_error("noise cache: short write");
}

template <typename T>
T get(std::FILE* f) {
  T v;
  if (std::fread(&v, sizeof(T), 1, f) != 1)
    throw std::runtime_error("noise cache: short read");
  return v;
}

}  // namespace

void write_noise_cache(const std::string& file, const NoiseIncrements& inc) {
  std::FILE* f = std::fopen(file.c_str(), "wb");
  if (!f) throw std::runtime_error("noise cache: cannot open " + file);
  try {
    std::fwrite("SPDN", 1, 4, f);
    put<std::uint32_t>(f, 1u);  // version
    put<std::uint32_t>(f, std::uint32_t(inc.grid.dim));
    put<std::uint32_t>(f, std::uint32_t(inc.grid.modes));
    put<std::uint32_t>(f, std::uint32_t(inc.grid.steps));
    put<double>(f, inc.grid.length);
    put<double>(f, inc.grid.t_max);
    put<std::uint64_t>(f, inc.seed);
    put<std::uint64_t>(f, inc.path);
    for (const auto& step : inc.coeffs) {
      if (step.size() != inc.grid.total_modes())
        throw std::runtime_error("noise cache: malformed step block");
      if (std::fwrite(step.data(), sizeof(Complex), step.size(), f) != step.size())
        throw std::runtime_error("noise cache: short write");
    }
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
}

NoiseIncrements read_noise_cache(const std::string& file) {
  std::FILE* f = std::fopen(file.c_str(), "rb");
  if (!f) throw std::runtime_error("noise cache: cannot open " + file);
  NoiseIncrements inc;
  try {
    char magic[4];
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, "SPDN", 4) != 0)
      throw std::runtime_error("noise cache: bad magic");
    const auto version = get<std::uint32_t>(f);
    if (version != 1u) throw std::runtime_error("noise cache: unknown version");
    inc.grid.dim = int(get<std::uint32_t>(f));
    inc.grid.modes = int(get<std::uint32_t>(f));
    inc.grid.steps = int(get<std::uint32_t>(f));
    inc.grid.length = get<double>(f);
    inc.grid.t_max = get<double>(f);
    inc.seed = get<std::uint64_t>(f);
    inc.path = get<std::uint64_t>(f);
    inc.grid.validate();
    inc.coeffs.assign(inc.grid.steps,
                      std::vector<Complex>(inc.grid.total_modes()));
    for (auto& step : inc.coeffs)
      if (std::fread(step.data(), sizeof(Complex), step.size(), f) != step.size())
        throw std::runtime_error("noise cache: short read");
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
  return inc;
}

std::vector<CovarianceCheck> pair_correlation_test(const GridSpec& grid,
                                                   const SpectralMeasure& mu,
                                                   std::uint64_t seed,
                                                   int n_steps) {
  if (n_steps < 100)
    throw std::invalid_argument("pair_correlation_test: need >= 100 steps");
  NoiseGenerator gen(grid, mu, seed);
  const std::size_t total = grid.total_modes();
  const int n = grid.modes;

  // Spatial profiles: indicator of the first quarter (axis 0), the opposite
  // quarter (disjoint), and the first quarter translated by length/2.
  auto quarter = [&](double start) {
    std::vector<double> g(total, 0.0);
    for (std::size_t j = 0; j < total; ++j) {
      double x[2];
      grid.node_point(j, x);
      double c = x[0] - start;
      c -= grid.length * std::floor(c / grid.length);
      if (c < 0.25 * grid.length) g[j] = 1.0;
    }
    return g;
  };
  const std::vector<double> g1 = quarter(0.0);
  const std::vector<double> g2 = quarter(0.5 * grid.length);
  const std::vector<double> g3 = quarter(0.25 * grid.length);

  auto coeffs_of = [&](const std::vector<double>& g) {
    std::vector<Complex> c(total);
    for (std::size_t j = 0; j < total; ++j) c[j] = g[j];
    dft_coefficients(c, n, grid.dim);
    return c;
  };
  const auto c1 = coeffs_of(g1);
  const auto c2 = coeffs_of(g2);
  const auto c3 = coeffs_of(g3);

  const double l2d = std::pow(grid.length, 2.0 * grid.dim);
  auto predicted = [&](const std::vector<Complex>& a,
                       const std::vector<Complex>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < total; ++k)
      s += gen.mode_weights().weight(k) * std::real(a[k] * std::conj(b[k]));
    return grid.dt() * l2d * s;
  };

  // W(g) for one step: h^d sum_j g_j dW(x_j) = L^d sum_k What_k conj(g_hat_k)
  auto pair_once = [&](const std::vector<Complex>& w,
                       const std::vector<Complex>& ghat) {
    Complex s(0.0, 0.0);
    for (std::size_t k = 0; k < total; ++k) s += w[k] * std::conj(ghat[k]);
    return std::real(s) * std::pow(grid.length, double(grid.dim));
  };

  struct Case {
    std::string label;
    const std::vector<Complex>* a;
    const std::vector<Complex>* b;
    bool disjoint_time = false;
  };
  const std::vector<Case> cases = {
      {"identical-support", &c1, &c1, false},
      {"disjoint-support", &c1, &c2, false},
      {"translated-support", &c3, &c3, false},
      {"disjoint-time", &c1, &c1, true},
  };

  std::vector<Complex> w(total), w2(total);
  std::vector<std::vector<double>> products(cases.size());
  for (int s = 0; s < n_steps; ++s) {
    gen.step_coefficients(0, std::uint32_t(2 * s), w);
    gen.step_coefficients(0, std::uint32_t(2 * s + 1), w2);
    for (std::size_t c = 0; c < cases.size(); ++c) {
      const double wa = pair_once(w, *cases[c].a);
      const double wb = cases[c].disjoint_time ? pair_once(w2, *cases[c].b)
                                               : pair_once(w, *cases[c].b);
      products[c].push_back(wa * wb);
    }
  }

  std::vector<CovarianceCheck> out;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    CovarianceCheck chk;
    chk.label = cases[c].label;
    chk.predicted = cases[c].disjoint_time ? 0.0
                                           : predicted(*cases[c].a, *cases[c].b);
    MeanVar mv = mean_var(products[c]);
    chk.empirical = mv.mean;
    chk.z_score = mv.se_mean > 0.0 ? (mv.mean - chk.predicted) / mv.se_mean : 0.0;
    out.push_back(chk);
  }
  return out;
}

}  // namespace spdelab
