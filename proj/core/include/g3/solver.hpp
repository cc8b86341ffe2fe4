#pragma once

#include <vector>

#include "g3/gauge_config.hpp"

namespace g3 {

struct SolveOptions {
  int max_iters = 50;
  double residual_tol = 1e-8;   // on ‖E‖∞
  double gauge_penalty = 0.1;   // λ
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 30;
  int max_cg_iters = 300;
  double cg_tol_cap = 0.1;      // inner relative tolerance = min(cap, ‖E‖∞)
  void validate() const;        // ConfigError on residual_tol <= 0 or λ < 0
};

struct SolveReport {
  int iterations = 0;
  int cg_iterations = 0;
  double final_residual = 0;  // ‖E‖∞
  double initial_residual = 0;
  double penalty = 0;         // ‖∂^μA_μ‖∞ at exit, reported separately
  double action = 0;
  double objective = 0;
  std::vector<double> min_det_trajectory;
  std::vector<double> residual_trajectory;
  double coupling = 1;        // continuation stage scale
  bool converged = false;
  bool singular = false;      // det(Y) guard tripped
  std::string message;
};

// Φ = ½∫‖E‖² + λ·½∫(∂^μA_μ)², flat sums over components.
double objective(const GaugeConfig& cfg, const SolveOptions& opts);
// ∇Φ with respect to the grid values of A, as a P × m grid (∫ weights included).
std::vector<double> objective_gradient(const GaugeConfig& cfg, const SolveOptions& opts);

struct SolveResult {
  GaugeConfig cfg;
  SolveReport report;
};
// Spectral lattices only. Never throws on non-convergence; the report carries the status.
SolveResult gauss_newton_solve(const GaugeConfig& cfg0, const SolveOptions& opts);

struct ContinuationResult {
  std::vector<SolveReport> stages;
  std::vector<GaugeConfig> solutions;  // one per completed stage
  bool completed = false;
};
// Stage k solves with the aux bracket scaled by k/steps, k = 0..steps, from the previous solution.
ContinuationResult continuation_in_coupling(const GaugeConfig& cfg0, int steps, const SolveOptions& opts);

}  // namespace g3
