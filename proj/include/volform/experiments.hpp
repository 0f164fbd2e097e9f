#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "volform/geometry.hpp"
#include "volform/grid.hpp"
#include "volform/solver.hpp"

namespace volform {

struct CheckReport {
  std::string name;
  bool passed = false;
  double worst_violation = 0.0;
  double slack_used = 0.0;
  long samples = 0;
  uint64_t seed = 0;
  std::string details;
};

// Knobs shared by the experiment suites.
struct ExperimentConfig {
  uint64_t seed = 42;
  long samples = 1000;
  double c_slack = 10.0;
  std::vector<double> lambdas{0.0, 0.25, 0.5, 0.75, 1.0};
  double eps = 1.0 / 64.0;  // epsilon for geodesic-based checks
};

// Band-limited trigonometric fields: a handful of modes with |k|_inf capped
// at max(1, n/4), amplitudes rescaled so the continuum bound on sup|lap phi|
// equals target. Deterministic given the generator state.
class TrigFieldGen {
 public:
  explicit TrigFieldGen(uint64_t seed) : rng_(seed) {}

  SpatialField random_admissible(const TorusGrid& g, double target_sup_lap = 0.5);
  // Same band limit without the admissibility scaling; sup-norm about amp.
  SpatialField random_tangent(const TorusGrid& g, double amp = 1.0);

  std::mt19937_64& rng() { return rng_; }

 private:
  std::vector<TrigMode> random_modes(const TorusGrid& g, int count);
  std::mt19937_64 rng_;
};

// Solve the perturbed geodesic problem at the given epsilon: continuity in s
// at the first schedule entry, then geometric descent in epsilon to target.
SolveReport solve_geodesic(const BoundaryPair& b, double eps, const TorusGrid& g,
                           const SolverConfig& cfg);

// Geodesic distance between two admissible points at epsilon.
double geodesic_distance(const SpatialField& a, const SpatialField& b, double eps,
                         const TorusGrid& g, const SolverConfig& cfg);

// Family over endpoint curves s -> (phi0 fixed, phi1(s)), warm-started
// member to member.
GeodesicFamily make_family(const SpatialField& phi0, const std::vector<SpatialField>& phi1_of_s,
                           double eps, const TorusGrid& g, const SolverConfig& cfg);

// Largest admissible barrier constant for the solved data: covers both the
// time-concavity side (1-s)/(2s) and the lower-barrier positivity side
// 2a (1 + min lap) > sup|grad phi0 - grad phi1|^2 + eps, with a safety factor.
double barrier_constant(const BoundaryPair& b, double eps, double s, const TorusGrid& g);

// Comparison principle: solutions at equal epsilon differ at most by their
// boundary gap, up to discretization slack.
CheckReport check_comparison(const BoundaryPair& b1, const BoundaryPair& b2, double eps,
                             const TorusGrid& g, const SolverConfig& cfg,
                             const ExperimentConfig& xcfg);

// Barrier sandwich Psi_{-a} <= phi <= Psi_a for the computed constant a.
CheckReport check_barriers(const SolveReport& rep, const BoundaryPair& b, double a,
                           const TorusGrid& g, double rounding_slack = 1e-8);

// Triangle inequality d(psi, phi1) <= d(psi, phi0) + d(phi0, phi1).
CheckReport check_triangle(const SpatialField& psi, const SpatialField& phi0,
                           const SpatialField& phi1, double eps, const TorusGrid& g,
                           const SolverConfig& cfg, const ExperimentConfig& xcfg);

// Quadrilateral comparison d^2(A,P) <= (1-l) d^2(A,B) + l d^2(A,C)
// - l(1-l) d^2(B,C), P the slice of the B-C path at t = l.
CheckReport check_cat0(const SpatialField& A, const SpatialField& B, const SpatialField& C,
                       const std::vector<double>& lambdas, double eps, const TorusGrid& g,
                       const SolverConfig& cfg, const ExperimentConfig& xcfg);

// Convexity of |Y(t)| and the endpoint inequality <Y, D_X Y> >= <Y, Y> at
// t=1 for families with fixed left endpoint.
CheckReport check_jacobi(const GeodesicFamily& fam, const TorusGrid& g,
                         const ExperimentConfig& xcfg);

// Drift(eps/2)/drift(eps) of the energy element sits in [1/4, 3/4]; both
// drifts under 10*newton_tol auto-pass.
CheckReport check_energy_constancy(const SolveReport& rep, const BoundaryPair& b,
                                   const TorusGrid& g, const SolverConfig& cfg);

// Positive length: d(0, phi) dominates the one-sided mass integrals of a
// normalized phi.
CheckReport check_lower_bound(const SpatialField& phi, double eps, const TorusGrid& g,
                              const SolverConfig& cfg, const ExperimentConfig& xcfg);

// Random verification of the matrix inequality Q(A) > 0 for A > 0, the
// equal-Q convexity properties, and midpoint concavity of log_q.
CheckReport check_concavity(long samples, uint64_t seed);

// Epsilon sweep: consecutive sup distances decrease and the weak-C2
// monitors sup|lap phi|, sup|phi_tt|, sup|grad phi_t| stay uniformly bounded.
CheckReport convergence_study(const BoundaryPair& b, const std::vector<double>& eps_schedule,
                              const TorusGrid& g, const SolverConfig& cfg);

// Weak-C2 monitor values of one solution.
struct WeakC2Monitors {
  double sup_lap = 0.0;
  double sup_tt = 0.0;
  double sup_grad_t = 0.0;
};
WeakC2Monitors weak_c2_monitors(const SpacetimeField& phi, const TorusGrid& g);

}  // namespace volform
