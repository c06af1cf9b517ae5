#include "spdelab/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace spdelab {

namespace {

double two_pi_sq(double r) {
  const double w = 2.0 * kPi * r;
  return w * w;
}

}  // namespace

SpdeSolver::SpdeSolver(const GridSpec& grid, const SpectralMeasure& mu,
                       const FundamentalSolution& sol,
                       const CoefficientPair& coeffs, const InitialData& init,
                       const std::vector<double>& obs_point, std::uint64_t seed)
    : grid_(grid),
      mu_(mu),
      sol_(sol),
      coeffs_(coeffs),
      init_(init),
      gen_(grid, mu, seed) {
  grid_.validate();
  if (mu_.dim() != grid_.dim || sol_.dim() != grid_.dim)
    throw std::invalid_argument("SpdeSolver: dimension mismatch");
  if (is_first_order()) {
    if (grid_.dim > 2)
      throw std::invalid_argument("SpdeSolver: heat supports dim 1 and 2");
    if (!init_.v0.is_zero())
      throw std::invalid_argument("SpdeSolver: heat takes no velocity data");
  } else if (grid_.dim != 1) {
    throw std::invalid_argument("SpdeSolver: wave-type solvers support dim 1");
  }
  AdmissibilityReport adm = is_admissible(mu_);
  if (!adm.admissible)
    throw std::domain_error(
        "SpdeSolver: measure fails the weighted-integral test (" +
        mu_.describe() + "); the lattice variance would not stabilise");
  obs_node_ = grid_.node_index(obs_point);

  const std::size_t total = grid_.total_modes();
  const double dt = grid_.dt();
  const bool second = !is_first_order();
  const double damping =
      sol_.kind() == FundamentalSolution::Kind::damped_wave ? 1.0 : 0.0;

  a_uu_.resize(total);
  a_uv_.assign(total, 0.0);
  a_vu_.assign(total, 0.0);
  a_vv_.assign(total, 0.0);
  n_u_.resize(total);
  n_v_.assign(total, 0.0);
  d_u_.resize(total);
  d_v_.assign(total, 0.0);
  for (std::size_t k = 0; k < total; ++k) {
    const double r = grid_.mode_radius(k);
    if (!second) {
      a_uu_[k] = sol_.fourier_transform(dt, r);
      n_u_[k] = std::sqrt(sol_.time_integral_sq(dt, r) / dt);
      d_u_[k] = dt;  // frozen drift applied pointwise, no spatial filter
    } else {
      const double G = sol_.fourier_transform(dt, r);
      const double Gp = sol_.dt_fourier_transform(dt, r);
      a_uu_[k] = Gp + damping * G;
      a_uv_[k] = G;
      a_vu_[k] = -two_pi_sq(r) * G;
      a_vv_[k] = Gp;
      n_u_[k] = G;
      n_v_[k] = Gp;
      d_u_[k] = sol_.time_integral(dt, r);
      d_v_[k] = G;
    }
  }

  // Initial data in coefficient space.
  {
    std::vector<double> u0 = init_.u0.sample(grid_);
    u0_hat_.assign(total, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < total; ++j) u0_hat_[j] = u0[j];
    dft_coefficients(u0_hat_, grid_.modes, grid_.dim);
    if (second) {
      std::vector<double> v0 = init_.v0.sample(grid_);
      v0_hat_.assign(total, Complex(0.0, 0.0));
      for (std::size_t j = 0; j < total; ++j) v0_hat_[j] = v0[j];
      dft_coefficients(v0_hat_, grid_.modes, grid_.dim);
    }
  }

  // Observation phase e^{2 pi i k.j*/n} and homogeneous value there.
  obs_phase_.resize(total);
  {
    const int n = grid_.modes;
    std::size_t rem = obs_node_;
    int jidx[2] = {0, 0};
    if (grid_.dim == 1) {
      jidx[0] = int(rem);
    } else {
      jidx[0] = int(rem / std::size_t(n));
      jidx[1] = int(rem % std::size_t(n));
    }
    for (std::size_t k = 0; k < total; ++k) {
      int kk[2] = {0, 0};
      grid_.signed_modes(k, kk);
      double ang = 0.0;
      for (int a = 0; a < grid_.dim; ++a)
        ang += double(kk[a]) * double(jidx[a]) / double(n);
      obs_phase_[k] = Complex(std::cos(2.0 * kPi * ang), std::sin(2.0 * kPi * ang));
    }
  }

  // Weight of step-n noise in the final observable.  heat inserts through
  // the alpha filter and decays for the remaining steps; the wave family's
  // left-point impulse composes to FG(t_max - t_n) exactly.
  mart_w_.assign(grid_.steps, std::vector<double>(total, 0.0));
  for (int nstep = 0; nstep < grid_.steps; ++nstep) {
    const double tau = double(grid_.steps - 1 - nstep) * dt;
    for (std::size_t k = 0; k < total; ++k) {
      const double r = grid_.mode_radius(k);
      if (!second)
        mart_w_[nstep][k] = sol_.fourier_transform(tau, r) * n_u_[k];
      else
        mart_w_[nstep][k] = sol_.fourier_transform(tau + dt, r);
    }
  }
  if (!coeffs_.b.is_zero()) {
    drift_w_.assign(grid_.steps, std::vector<double>(total, 0.0));
    for (int nstep = 0; nstep < grid_.steps; ++nstep) {
      const double tau = double(grid_.steps - 1 - nstep) * dt;
      for (std::size_t k = 0; k < total; ++k) {
        const double r = grid_.mode_radius(k);
        if (!second) {
          drift_w_[nstep][k] = sol_.fourier_transform(tau, r) * d_u_[k];
        } else {
          const double G = sol_.fourier_transform(tau, r);
          const double Gp = sol_.dt_fourier_transform(tau, r);
          drift_w_[nstep][k] =
              (Gp + damping * G) * d_u_[k] + G * d_v_[k];
        }
      }
    }
  }

  std::vector<double> i0 = initial_field(grid_.t_max);
  initial_obs_ = i0[obs_node_];
}

std::vector<double> SpdeSolver::initial_field(double t) const {
  const std::size_t total = grid_.total_modes();
  const double damping =
      sol_.kind() == FundamentalSolution::Kind::damped_wave ? 1.0 : 0.0;
  std::vector<Complex> acc(total, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < total; ++k) {
    const double r = grid_.mode_radius(k);
    if (is_first_order()) {
      acc[k] = sol_.fourier_transform(t, r) * u0_hat_[k];
    } else {
      const double G = sol_.fourier_transform(t, r);
      const double Gp = sol_.dt_fourier_transform(t, r);
      acc[k] = (Gp + damping * G) * u0_hat_[k] + G * v0_hat_[k];
    }
  }
  dft_inverse(acc, grid_.modes, grid_.dim);
  std::vector<double> out(total);
  for (std::size_t j = 0; j < total; ++j) out[j] = acc[j].real();
  return out;
}

double SpdeSolver::scheme_noise_variance() const {
  const double dt = grid_.dt();
  double s = 0.0;
  for (int n = 0; n < grid_.steps; ++n) {
    const auto& w = mart_w_[n];
    for (std::size_t k = 0; k < w.size(); ++k)
      s += w[k] * w[k] * gen_.mode_weights().weight(k);
  }
  return s * dt;
}

namespace {

struct StepBuffers {
  std::vector<Complex> wphys, qhat, bhat, unew;
};

}  // namespace

SolvedPath SpdeSolver::solve_with_increments(
    const std::vector<std::vector<Complex>>& increments,
    const SolveOptions& opt) const {
  if (int(increments.size()) != grid_.steps)
    throw std::invalid_argument("solve_with_increments: step count mismatch");

  const std::size_t total = grid_.total_modes();
  const int n = grid_.modes;
  const bool second = !is_first_order();
  const bool have_b = !coeffs_.b.is_zero();
  const auto& sigma = coeffs_.sigma;
  const auto& b = coeffs_.b;

  SolvedPath out;
  out.martingale_increments.resize(grid_.steps);
  if (opt.record_states) out.states.reserve(grid_.steps);
  if (opt.record_increments) out.increment_coeffs = increments;

  std::vector<Complex> uhat = u0_hat_;
  std::vector<Complex> vhat = second ? v0_hat_ : std::vector<Complex>();
  std::vector<double> u = init_.u0.sample(grid_);
  StepBuffers buf;
  buf.wphys.resize(total);
  buf.qhat.resize(total);
  buf.bhat.resize(total);
  buf.unew.resize(total);

  double drift_total = 0.0;
  for (int step = 0; step < grid_.steps; ++step) {
    if (opt.record_states) out.states.push_back(u);
    const std::vector<Complex>& what = increments[step];
    if (what.size() != total)
      throw std::invalid_argument("solve_with_increments: mode count mismatch");

    // physical increment
    buf.wphys = what;
    dft_inverse(buf.wphys, n, grid_.dim);

    // sigma(u) dW, to coefficients
    for (std::size_t j = 0; j < total; ++j)
      buf.qhat[j] = Complex(sigma(u[j]) * buf.wphys[j].real(), 0.0);
    dft_coefficients(buf.qhat, n, grid_.dim);

    // frozen drift, to coefficients
    if (have_b) {
      for (std::size_t j = 0; j < total; ++j)
        buf.bhat[j] = Complex(b(u[j]), 0.0);
      dft_coefficients(buf.bhat, n, grid_.dim);
    }

    // contribution of this step's noise (and drift) to the observable
    {
      const auto& w = mart_w_[step];
      Complex acc(0.0, 0.0);
      for (std::size_t k = 0; k < total; ++k)
        acc += w[k] * buf.qhat[k] * obs_phase_[k];
      out.martingale_increments[step] = acc.real();
      if (have_b) {
        const auto& dw = drift_w_[step];
        Complex dacc(0.0, 0.0);
        for (std::size_t k = 0; k < total; ++k)
          dacc += dw[k] * buf.bhat[k] * obs_phase_[k];
        drift_total += dacc.real();
      }
    }

    // state update
    if (!second) {
      for (std::size_t k = 0; k < total; ++k) {
        Complex v = a_uu_[k] * uhat[k] + n_u_[k] * buf.qhat[k];
        if (have_b) v += d_u_[k] * buf.bhat[k];
        uhat[k] = v;
      }
    } else {
      for (std::size_t k = 0; k < total; ++k) {
        Complex nu = a_uu_[k] * uhat[k] + a_uv_[k] * vhat[k] +
                     n_u_[k] * buf.qhat[k];
        Complex nv = a_vu_[k] * uhat[k] + a_vv_[k] * vhat[k] +
                     n_v_[k] * buf.qhat[k];
        if (have_b) {
          nu += d_u_[k] * buf.bhat[k];
          nv += d_v_[k] * buf.bhat[k];
        }
        buf.unew[k] = nu;
        vhat[k] = nv;
      }
      uhat.swap(buf.unew);
    }

    // physical field for the next step's coefficient evaluations
    buf.wphys = uhat;
    dft_inverse(buf.wphys, n, grid_.dim);
    for (std::size_t j = 0; j < total; ++j) u[j] = buf.wphys[j].real();
  }

  out.value = u[obs_node_];
  out.initial_part = initial_obs_;
  double m = 0.0, qv = 0.0;
  for (double dm : out.martingale_increments) {
    m += dm;
    qv += dm * dm;
  }
  out.noise_part = m;
  out.quadratic_variation = qv;
  out.drift_part = drift_total;
  if (opt.record_final_field) out.final_field = u;
  return out;
}

SolvedPath SpdeSolver::solve_path(std::uint64_t path,
                                  const SolveOptions& opt) const {
  std::vector<std::vector<Complex>> inc(grid_.steps);
  for (int s = 0; s < grid_.steps; ++s)
    gen_.step_coefficients(path, std::uint32_t(s), inc[s]);
  return solve_with_increments(inc, opt);
}

EnsembleResult run_ensemble(const SpdeSolver& solver, std::size_t n,
                            int threads) {
  if (threads < 1) throw std::invalid_argument("run_ensemble: threads < 1");
  EnsembleResult out;
  out.values.resize(n);
  out.noise_parts.resize(n);
  out.quadratic_variations.resize(n);
  out.initial_at_obs = solver.initial_at_obs();
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      SolvedPath sp = solver.solve_path(p);
      out.values[p] = sp.value;
      out.noise_parts[p] = sp.noise_part;
      out.quadratic_variations[p] = sp.quadratic_variation;
    }
  };
  if (threads == 1 || n < 2) {
    work(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(n, std::size_t(t) * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return out;
}

MomentTable moment_survey(const SpdeSolver& solver, std::size_t n,
                          const std::vector<double>& orders, int threads) {
  if (n == 0) throw std::invalid_argument("moment_survey: n == 0");
  for (double p : orders)
    if (!(p > 0.0)) throw std::invalid_argument("moment_survey: orders must be > 0");
  const std::size_t nodes = solver.grid().total_modes();
  const int nt = std::max(1, threads);
  std::vector<std::vector<std::vector<double>>> partial(
      nt, std::vector<std::vector<double>>(orders.size(),
                                           std::vector<double>(nodes, 0.0)));
  SolveOptions opt;
  opt.record_final_field = true;
  auto work = [&](int tid, std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      SolvedPath sp = solver.solve_path(p, opt);
      for (std::size_t io = 0; io < orders.size(); ++io)
        for (std::size_t j = 0; j < nodes; ++j)
          partial[tid][io][j] += std::pow(std::abs(sp.final_field[j]), orders[io]);
    }
  };
  if (nt == 1) {
    work(0, 0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
      const std::size_t lo = std::min(n, std::size_t(t) * chunk);
      const std::size_t hi = std::min(n, lo + chunk);
      if (lo < hi) pool.emplace_back(work, t, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  MomentTable table;
  table.orders = orders;
  table.node_abs.assign(orders.size(), std::vector<double>(nodes, 0.0));
  table.sup_over_nodes.assign(orders.size(), 0.0);
  for (int t = 0; t < nt; ++t)
    for (std::size_t io = 0; io < orders.size(); ++io)
      for (std::size_t j = 0; j < nodes; ++j)
        table.node_abs[io][j] += partial[t][io][j];
  for (std::size_t io = 0; io < orders.size(); ++io) {
    for (std::size_t j = 0; j < nodes; ++j) {
      table.node_abs[io][j] /= double(n);
      table.sup_over_nodes[io] =
          std::max(table.sup_over_nodes[io], table.node_abs[io][j]);
    }
  }
  return table;
}

}  // namespace spdelab
