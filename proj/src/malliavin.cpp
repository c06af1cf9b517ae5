#include "spdelab/malliavin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "spdelab/phi_functional.hpp"
#include "spdelab/rng.hpp"

namespace spdelab {

double MalliavinKernel::norm_sq(double a, double e) const {
  const double dt = grid.dt();
  const double tol = 1e-9 * dt;
  // a source step left out of the kernel must not fall inside the window
  if (source_begin > 0 && double(source_begin - 1) * dt >= a - tol &&
      double(source_begin - 1) * dt < e - tol)
    throw std::invalid_argument(
        "MalliavinKernel::norm_sq: window starts before computed sources");
  double s = 0.0;
  for (std::size_t m = 0; m < step_norm.size(); ++m) {
    const double ti = double(source_begin + int(m)) * dt;
    if (ti >= a - tol && ti < e - tol) s += step_norm[m];
  }
  return s;
}

double MalliavinKernel::norm_sq_total() const {
  double s = 0.0;
  for (double v : step_norm) s += v;
  return s;
}

MalliavinKernel derivative_kernel(const SpdeSolver& solver,
                                  const SolvedPath& path, int source_begin) {
  const GridSpec& grid = solver.grid();
  if (grid.dim != 1)
    throw std::invalid_argument("derivative_kernel: dim 1 only");
  const int steps = grid.steps;
  if (int(path.states.size()) != steps ||
      int(path.increment_coeffs.size()) != steps)
    throw std::invalid_argument(
        "derivative_kernel: path needs record_states and record_increments");
  if (source_begin < 0 || source_begin >= steps)
    throw std::invalid_argument("derivative_kernel: source_begin out of range");

  const std::size_t total = grid.total_modes();
  const int n = grid.modes;
  const bool second = !solver.is_first_order();
  const Coefficient& sigma = solver.coefficients().sigma;
  const Coefficient& b = solver.coefficients().b;
  const bool sig_lin = sigma.deriv_sup() > 0.0;
  const bool b_lin = b.deriv_sup() > 0.0;
  const bool needs_fft = sig_lin || b_lin;

  const auto& a_uu = solver.prop_uu();
  const auto& a_uv = solver.prop_uv();
  const auto& a_vu = solver.prop_vu();
  const auto& a_vv = solver.prop_vv();
  const auto& n_u = solver.noise_filter_u();
  const auto& n_v = solver.noise_filter_v();
  const auto& d_u = solver.drift_filter_u();
  const auto& d_v = solver.drift_filter_v();

  // unit roots e^{-2 pi i m / n}
  std::vector<Complex> root(n);
  for (int m = 0; m < n; ++m) {
    const double ang = -2.0 * kPi * double(m) / double(n);
    root[m] = Complex(std::cos(ang), std::sin(ang));
  }

  const int nsrc = steps - source_begin;
  // state of every propagated impulse, u rows flattened [src][j * total + k]
  std::vector<std::vector<Complex>> bu(nsrc);
  std::vector<std::vector<Complex>> bv(second ? nsrc : 0);

  std::vector<Complex> scratch(total), gfft(total), hfft(total);
  std::vector<double> dwphys(total), sd(total), bd(total);

  for (int step = source_begin; step < steps; ++step) {
    const std::vector<double>& u = path.states[step];

    // propagate impulses inserted at earlier source steps
    const int active = step - source_begin;
    if (active > 0) {
      if (needs_fft) {
        scratch = path.increment_coeffs[step];
        dft_inverse(scratch, n, grid.dim);
        for (std::size_t j = 0; j < total; ++j) {
          dwphys[j] = scratch[j].real();
          if (sig_lin) sd[j] = sigma.deriv(u[j]) * dwphys[j];
          if (b_lin) bd[j] = b.deriv(u[j]);
        }
      }
      for (int src = 0; src < active; ++src) {
        auto& rowsu = bu[src];
        for (std::size_t jrow = 0; jrow < total; ++jrow) {
          Complex* vu = rowsu.data() + jrow * total;
          Complex* vv = second ? bv[src].data() + jrow * total : nullptr;
          if (needs_fft) {
            // physical value of the u component of this impulse
            std::copy(vu, vu + total, scratch.begin());
            dft_inverse(scratch, n, grid.dim);
            if (sig_lin) {
              for (std::size_t j = 0; j < total; ++j)
                gfft[j] = Complex(sd[j] * scratch[j].real(), 0.0);
              dft_coefficients(gfft, n, grid.dim);
            }
            if (b_lin) {
              for (std::size_t j = 0; j < total; ++j)
                hfft[j] = Complex(bd[j] * scratch[j].real(), 0.0);
              dft_coefficients(hfft, n, grid.dim);
            }
            for (std::size_t k = 0; k < total; ++k) {
              Complex nu = a_uu[k] * vu[k];
              Complex nv(0.0, 0.0);
              if (second) {
                nu += a_uv[k] * vv[k];
                nv = a_vu[k] * vu[k] + a_vv[k] * vv[k];
              }
              if (sig_lin) {
                nu += n_u[k] * gfft[k];
                if (second) nv += n_v[k] * gfft[k];
              }
              if (b_lin) {
                nu += d_u[k] * hfft[k];
                if (second) nv += d_v[k] * hfft[k];
              }
              vu[k] = nu;
              if (second) vv[k] = nv;
            }
          } else {
            for (std::size_t k = 0; k < total; ++k) {
              const Complex cu = vu[k];
              if (second) {
                const Complex cv = vv[k];
                vu[k] = a_uu[k] * cu + a_uv[k] * cv;
                vv[k] = a_vu[k] * cu + a_vv[k] * cv;
              } else {
                vu[k] = a_uu[k] * cu;
              }
            }
          }
        }
      }
    }

    // insert the impulses of this source step
    {
      auto& rowsu = bu[active];
      rowsu.assign(total * total, Complex(0.0, 0.0));
      if (second) bv[active].assign(total * total, Complex(0.0, 0.0));
      for (std::size_t j = 0; j < total; ++j) {
        const double amp = sigma(u[j]) / double(total);
        Complex* vu = rowsu.data() + j * total;
        Complex* vv = second ? bv[active].data() + j * total : nullptr;
        for (std::size_t k = 0; k < total; ++k) {
          const Complex ph = amp * root[(k * j) % std::size_t(n)];
          vu[k] = n_u[k] * ph;
          if (second) vv[k] = n_v[k] * ph;
        }
      }
    }
  }

  // read off the observable derivative and the spectral row transforms
  MalliavinKernel out;
  out.grid = grid;
  out.obs_node = solver.obs_node();
  out.source_begin = source_begin;
  out.rows.assign(nsrc, std::vector<double>(total, 0.0));
  out.rows_hat.assign(nsrc, std::vector<Complex>(total));
  out.step_norm.assign(nsrc, 0.0);

  // obs phase e^{+2 pi i k j*/n}
  std::vector<Complex> obs_phase(total);
  for (std::size_t k = 0; k < total; ++k)
    obs_phase[k] = std::conj(root[(k * out.obs_node) % std::size_t(n)]);

  const auto& weights = solver.generator().mode_weights();
  const double dt = grid.dt();
  for (int src = 0; src < nsrc; ++src) {
    auto& row = out.rows[src];
    for (std::size_t j = 0; j < total; ++j) {
      const Complex* vu = bu[src].data() + j * total;
      Complex acc(0.0, 0.0);
      for (std::size_t k = 0; k < total; ++k) acc += vu[k] * obs_phase[k];
      row[j] = acc.real();
    }
    auto& rhat = out.rows_hat[src];
    for (std::size_t j = 0; j < total; ++j) rhat[j] = Complex(row[j], 0.0);
    dft_forward(rhat, n, grid.dim);
    double s = 0.0;
    for (std::size_t k = 0; k < total; ++k)
      s += std::norm(rhat[k]) * weights.weight(k);
    out.step_norm[src] = dt * s;
  }
  return out;
}

namespace {

//! F_z(h_i)(k) = h^d * unnormalised DFT of the step's physical values.
std::vector<Complex> direction_transform(const GridSpec& grid,
                                         const std::vector<double>& hi) {
  const std::size_t total = grid.total_modes();
  if (hi.size() != total)
    throw std::invalid_argument("direction: node count mismatch");
  std::vector<Complex> out(total);
  for (std::size_t j = 0; j < total; ++j) out[j] = Complex(hi[j], 0.0);
  dft_forward(out, grid.modes, grid.dim);
  const double hd = std::pow(grid.h(), grid.dim);
  for (auto& v : out) v *= hd;
  return out;
}

}  // namespace

double pair_with_direction(const MalliavinKernel& kernel,
                           const SpdeSolver& solver,
                           const std::vector<std::vector<double>>& h) {
  const GridSpec& grid = solver.grid();
  if (int(h.size()) != grid.steps)
    throw std::invalid_argument("pair_with_direction: step count mismatch");
  const auto& weights = solver.generator().mode_weights();
  const double dt = grid.dt();
  double s = 0.0;
  for (int i = kernel.source_begin; i < grid.steps; ++i) {
    const auto& rhat = kernel.rows_hat[i - kernel.source_begin];
    const std::vector<Complex> fh = direction_transform(grid, h[i]);
    double acc = 0.0;
    for (std::size_t k = 0; k < rhat.size(); ++k)
      acc += weights.weight(k) * std::real(rhat[k] * std::conj(fh[k]));
    s += dt * acc;
  }
  return s;
}

double directional_difference(const SpdeSolver& solver, const SolvedPath& base,
                              const std::vector<std::vector<double>>& h,
                              double eps) {
  const GridSpec& grid = solver.grid();
  if (int(base.increment_coeffs.size()) != grid.steps)
    throw std::invalid_argument(
        "directional_difference: base path needs record_increments");
  if (!(eps > 0.0)) throw std::invalid_argument("directional_difference: eps <= 0");
  const auto& weights = solver.generator().mode_weights();
  const double dt = grid.dt();
  std::vector<std::vector<Complex>> shifted = base.increment_coeffs;
  for (int i = 0; i < grid.steps; ++i) {
    const std::vector<Complex> fh = direction_transform(grid, h[i]);
    for (std::size_t k = 0; k < fh.size(); ++k)
      shifted[i][k] += eps * dt * weights.weight(k) * fh[k];
  }
  SolvedPath moved = solver.solve_with_increments(shifted);
  return (moved.value - base.value) / eps;
}

std::vector<std::vector<double>> random_direction(const SpdeSolver& solver,
                                                  std::uint64_t tag) {
  const GridSpec& grid = solver.grid();
  const std::size_t total = grid.total_modes();
  std::vector<std::vector<double>> h(grid.steps, std::vector<double>(total, 0.0));
  for (int i = 0; i < grid.steps; ++i) {
    for (int m = 0; m <= 3; ++m) {
      const auto z = normal_pair(solver.seed() ^ 0x9e3779b97f4a7c15ull, tag,
                                 std::uint32_t(i), std::uint32_t(m),
                                 /*purpose=*/7);
      for (std::size_t j = 0; j < total; ++j) {
        double x[2];
        grid.node_point(j, x);
        const double ang = 2.0 * kPi * double(m) * x[0] / grid.length;
        h[i][j] += z[0] * std::cos(ang) + (m > 0 ? z[1] * std::sin(ang) : 0.0);
      }
    }
  }
  // normalise to unit covariance norm
  const auto& weights = solver.generator().mode_weights();
  double nsq = 0.0;
  for (int i = 0; i < grid.steps; ++i) {
    const std::vector<Complex> fh = direction_transform(grid, h[i]);
    double acc = 0.0;
    for (std::size_t k = 0; k < fh.size(); ++k)
      acc += weights.weight(k) * std::norm(fh[k]);
    nsq += grid.dt() * acc;
  }
  if (nsq <= 0.0)
    throw std::runtime_error("random_direction: degenerate direction");
  const double scale = 1.0 / std::sqrt(nsq);
  for (auto& hi : h)
    for (auto& v : hi) v *= scale;
  return h;
}

namespace {

void parallel_paths(std::size_t n, int threads,
                    const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t p = 0; p < n; ++p) body(p);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(n, std::size_t(t) * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo < hi)
      pool.emplace_back([lo, hi, &body]() {
        for (std::size_t p = lo; p < hi; ++p) body(p);
      });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

WindowScalingReport window_scaling(const SpdeSolver& solver,
                                   const std::vector<double>& deltas,
                                   std::size_t n_paths, int threads) {
  const GridSpec& grid = solver.grid();
  if (deltas.empty()) throw std::invalid_argument("window_scaling: no deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0) || deltas[i] >= grid.t_max + 1e-12)
      throw std::invalid_argument("window_scaling: deltas must lie in (0, t_max]");
    if (i > 0 && deltas[i] <= deltas[i - 1])
      throw std::invalid_argument("window_scaling: deltas must increase");
  }
  if (n_paths < 100)
    throw std::invalid_argument("window_scaling: need >= 100 paths");

  const double dt = grid.dt();
  const double dmax = deltas.back();
  int source_begin = int(std::ceil((grid.t_max - dmax) / dt - 1e-9));
  source_begin = std::max(0, std::min(source_begin, grid.steps - 1));

  SolveOptions opt;
  opt.record_states = true;
  opt.record_increments = true;

  std::vector<std::vector<double>> norms(deltas.size(),
                                         std::vector<double>(n_paths, 0.0));
  parallel_paths(n_paths, threads, [&](std::size_t p) {
    SolvedPath path = solver.solve_path(p, opt);
    MalliavinKernel kernel = derivative_kernel(solver, path, source_begin);
    for (std::size_t d = 0; d < deltas.size(); ++d)
      norms[d][p] = kernel.norm_sq(grid.t_max - deltas[d], grid.t_max);
  });

  WindowScalingReport rep;
  rep.deltas = deltas;
  std::vector<double> lx, ly;
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    MeanVar mv = mean_var(norms[d]);
    rep.mean_norms.push_back(mv.mean);
    rep.ses.push_back(mv.se_mean);
    const double ph = phi(solver.measure(), solver.solution(), deltas[d]).value;
    rep.phi_deltas.push_back(ph);
    lx.push_back(std::log(ph));
    ly.push_back(std::log(mv.mean));
  }
  rep.loglog = fit_line(lx, ly);
  return rep;
}

NegativeMomentReport negative_moment_survey(
    const SpectralMeasure& mu, const FundamentalSolution& sol,
    const CoefficientPair& coeffs, const InitialData& init,
    const std::vector<double>& obs_point, const GridSpec& base,
    const std::vector<double>& ts, std::size_t n_paths, std::uint64_t seed,
    int threads) {
  if (ts.empty()) throw std::invalid_argument("negative_moment_survey: no ts");
  if (n_paths < 2)
    throw std::invalid_argument("negative_moment_survey: need paths");
  NegativeMomentReport rep;
  SolveOptions opt;
  opt.record_states = true;
  opt.record_increments = true;
  for (std::size_t it = 0; it < ts.size(); ++it) {
    GridSpec g = base;
    g.t_max = ts[it];
    SpdeSolver solver(g, mu, sol, coeffs, init, obs_point,
                      seed + 1000003ull * it);
    std::vector<double> inv(n_paths, 0.0);
    parallel_paths(n_paths, threads, [&](std::size_t p) {
      SolvedPath path = solver.solve_path(p, opt);
      MalliavinKernel kernel = derivative_kernel(solver, path);
      inv[p] = 1.0 / kernel.norm_sq_total();
    });
    MeanVar mv = mean_var(inv);
    const double ph = phi(mu, sol, ts[it]).value;
    rep.ts.push_back(ts[it]);
    rep.phi_ts.push_back(ph);
    rep.mean_inv_norms.push_back(mv.mean);
    rep.products.push_back(mv.mean * ph);
  }
  double lo = rep.products.front(), hi = rep.products.front();
  for (double v : rep.products) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  rep.max_min_ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace spdelab
