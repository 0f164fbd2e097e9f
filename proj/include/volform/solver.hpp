#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "volform/grid.hpp"
#include "volform/operators.hpp"

namespace volform {

struct SolverConfig {
  double epsilon = 1.0;            // right-hand side of the perturbed equation
  int s_steps = 10;                // base number of continuation steps in s
  double newton_tol = 1e-10;       // sup-norm residual target
  int newton_max_iters = 50;
  double linear_rel_tol = 1e-12;   // verified against matrix-free dp_apply
  double ellipticity_guard = 1e-8; // minimum allowed margin along iterates
  std::vector<double> eps_schedule;  // strictly decreasing, first entry <= 1
  double backtrack_factor = 0.5;
  double min_s_step = 1e-6;

  void validate() const;
};

// Geometric halving 1, 1/2, ..., 2^-10.
std::vector<double> default_eps_schedule();

struct SolveReport {
  SpacetimeField phi;
  double residual_sup = std::numeric_limits<double>::infinity();
  EllipticityMargins margins{};
  std::vector<int> newton_iters;              // per accepted continuation step
  std::vector<double> s_trace;                // accepted s values, 0 ... 1
  std::vector<EllipticityMargins> step_margins;  // margins at each accepted step
  bool converged = false;
  bool margin_warning = false;   // margins at the guard within one newton_tol
  double s_reached = 0.0;
  double epsilon = 0.0;
  // sup-norm distance from the previous solution in an epsilon sweep; NaN for
  // the first entry.
  double dist_from_prev = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

// Linear solve failed to meet the relative-residual contract.
struct LinearSolveError : std::runtime_error {
  std::vector<double> residual_history;
  explicit LinearSolveError(const std::string& what, std::vector<double> hist = {})
      : std::runtime_error(what), residual_history(std::move(hist)) {}
};

// Solves dP(h) = rhs on interior nodes with h = 0 on the time boundaries.
// Assembles the stencil into a sparse matrix, factors it, and verifies the
// result against the matrix-free dp_apply at rel_tol (sup norms). Throws
// LinearSolveError on factorization failure or a missed tolerance.
SpacetimeField solve_dp_linear(const OperatorCoefficients& co, const SpacetimeField& rhs,
                               const TorusGrid& g, double rel_tol);

// s = 0 member of the continuity family: phi_tt + lap phi = eps with
// Dirichlet data in time. Linear, solved exactly in one step.
SpacetimeField solve_s0(const BoundaryPair& b, double eps, const TorusGrid& g,
                        const SolverConfig& cfg);

enum class NewtonStatus { converged, step_failure, max_iterations, linear_failure };

struct NewtonResult {
  SpacetimeField phi;
  double residual_sup = std::numeric_limits<double>::infinity();
  int iterations = 0;
  NewtonStatus status = NewtonStatus::max_iterations;
  std::vector<double> residual_trace;
};

// Damped Newton iteration for p_op(s, phi) = eps at fixed s. Backtracking
// line search on the residual sup norm; any step whose ellipticity margins
// would fall below cfg.ellipticity_guard is rejected. The boundary slices of
// the result equal b bit for bit.
NewtonResult newton_solve(double s, double eps, const BoundaryPair& b,
                          const SpacetimeField& init, const TorusGrid& g,
                          const SolverConfig& cfg);

// Continuity method in s from the linear problem at s=0 to the perturbed
// geodesic equation at s=1, warm-starting each step and halving the s-step
// on failure (down to cfg.min_s_step).
SolveReport continuation_in_s(const BoundaryPair& b, double eps, const TorusGrid& g,
                              const SolverConfig& cfg);

// Downward sweep over cfg.eps_schedule, each solve warm-started from the
// previous one; reports carry sup-norm distances between consecutive
// solutions. Failures are returned (converged = false), not thrown.
std::vector<SolveReport> continuation_in_eps(const BoundaryPair& b, const TorusGrid& g,
                                             const SolverConfig& cfg);

// Linear interpolation (1-t) phi0 + t phi1, the standard initial path.
SpacetimeField linear_in_time(const BoundaryPair& b, const TorusGrid& g);

}  // namespace volform
