#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spdelab/coefficients.hpp"
#include "spdelab/fundamental_solution.hpp"
#include "spdelab/grid.hpp"
#include "spdelab/solver.hpp"
#include "spdelab/spectral_measure.hpp"

namespace spdelab {

//! One experiment: operator, noise, lattice, coefficients, initial data and
//! observation point, plus run parameters.  Parsed from a small TOML subset:
//! [section] headers and `key = value` lines where value is a number, a
//! double-quoted string, or a flat array of numbers.
//!
//!   [operator]        kind ("heat" | "wave" | "damped_wave"), dim
//!   [measure]         kind ("white" | "riesz" | "exponential" | "atoms"),
//!                     beta, length_scale, atom_points (flattened, dim per
//!                     point), atom_masses
//!   [grid]            length, modes, steps
//!   [coefficients]    sigma_kind, sigma_params, b_kind, b_params
//!                     (kinds: "constant" [c]; "sine" [a0, a1, phase];
//!                      "clamped_affine" [slope, intercept, bound])
//!   [initial]         u0_kind, u0_params, v0_kind, v0_params
//!                     (kinds: "zero" []; "constant" [c]; "mode" [k, amp];
//!                      "bump" [radius, amp])
//!   [observe]         t (the time horizon), x (point coordinates)
//!   [run]             samples, seed, threads
struct ExperimentConfig {
  std::string operator_kind = "heat";
  int dim = 1;

  std::string measure_kind = "white";
  double beta = 0.0;
  double length_scale = 1.0;
  std::vector<double> atom_points;
  std::vector<double> atom_masses;

  double length = 1.0;
  int modes = 64;
  int steps = 64;

  std::string sigma_kind = "constant";
  std::vector<double> sigma_params{1.0};
  std::string b_kind = "constant";
  std::vector<double> b_params{0.0};

  std::string u0_kind = "zero";
  std::vector<double> u0_params;
  std::string v0_kind = "zero";
  std::vector<double> v0_params;

  double observe_t = 1.0;
  std::vector<double> observe_x{0.0};

  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
};

//! Parse the TOML subset above; throws std::runtime_error with a line number
//! on malformed input or unknown keys.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

//! Deterministic serialisation of everything that defines the experiment
//! (all sections except [run]); the pooling hash is computed over this, so
//! runs that differ only in samples, seed or threads pool together.
std::string canonical_text(const ExperimentConfig& cfg);

//! FNV-1a over canonical_text.
std::uint64_t config_hash(const ExperimentConfig& cfg);

// Factories from a parsed config.  Validation (dimension limits,
// admissibility, observation point on the lattice) happens in the
// constructed objects.
SpectralMeasure make_measure(const ExperimentConfig& cfg);
FundamentalSolution make_solution(const ExperimentConfig& cfg);
Coefficient make_coefficient(const std::string& kind,
                             const std::vector<double>& params);
CoefficientPair make_coefficients(const ExperimentConfig& cfg);
InitialData make_initial(const ExperimentConfig& cfg);
GridSpec make_grid(const ExperimentConfig& cfg);
SpdeSolver make_solver(const ExperimentConfig& cfg);

}  // namespace spdelab
