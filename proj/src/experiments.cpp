#include "volform/experiments.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "volform/operators.hpp"

namespace volform {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double disc_slack(const ExperimentConfig& xcfg, double eps, const TorusGrid& g) {
  return xcfg.c_slack * (eps + g.h * g.h + g.dt * g.dt);
}

}  // namespace

std::vector<TrigMode> TrigFieldGen::random_modes(const TorusGrid& g, int count) {
  const int kmax = std::max(1, g.n / 4);
  std::uniform_int_distribution<int> kdist(-kmax, kmax);
  std::uniform_real_distribution<double> adist(0.5, 1.0);
  std::uniform_real_distribution<double> pdist(0.0, 2.0 * kPi);
  std::vector<TrigMode> modes;
  modes.reserve(count);
  while (static_cast<int>(modes.size()) < count) {
    TrigMode m;
    bool zero = true;
    for (int a = 0; a < g.dim; ++a) {
      m.k[a] = kdist(rng_);
      if (m.k[a] != 0) zero = false;
    }
    if (zero) continue;
    m.amplitude = adist(rng_);
    m.phase = pdist(rng_);
    modes.push_back(m);
  }
  return modes;
}

SpatialField TrigFieldGen::random_admissible(const TorusGrid& g, double target_sup_lap) {
  std::uniform_int_distribution<int> cdist(2, 4);
  std::vector<TrigMode> modes = random_modes(g, cdist(rng_));
  const double bound = laplacian_sup_bound(modes);
  const double scale = target_sup_lap / bound;
  for (TrigMode& m : modes) m.amplitude *= scale;
  return make_trig_field(g, modes);
}

SpatialField TrigFieldGen::random_tangent(const TorusGrid& g, double amp) {
  std::uniform_int_distribution<int> cdist(1, 3);
  std::vector<TrigMode> modes = random_modes(g, cdist(rng_));
  double total = 0.0;
  for (const TrigMode& m : modes) total += std::abs(m.amplitude);
  for (TrigMode& m : modes) m.amplitude *= amp / total;
  return make_trig_field(g, modes);
}

SolveReport solve_geodesic(const BoundaryPair& b, double eps, const TorusGrid& g,
                           const SolverConfig& cfg) {
  if (eps >= 1.0) return continuation_in_s(b, eps, g, cfg);
  SolverConfig c = cfg;
  c.eps_schedule.clear();
  double e = 1.0;
  while (e > eps * (1.0 + 1e-12)) {
    c.eps_schedule.push_back(e);
    e *= 0.5;
  }
  c.eps_schedule.push_back(eps);
  auto reports = continuation_in_eps(b, g, c);
  return reports.back();
}

double geodesic_distance(const SpatialField& a, const SpatialField& b, double eps,
                         const TorusGrid& g, const SolverConfig& cfg) {
  const SolveReport rep = solve_geodesic(BoundaryPair{a, b}, eps, g, cfg);
  if (!rep.converged)
    throw std::runtime_error("geodesic_distance: solve failed (" + rep.note + ")");
  return distance(rep.phi, g);
}

GeodesicFamily make_family(const SpatialField& phi0, const std::vector<SpatialField>& phi1_of_s,
                           double eps, const TorusGrid& g, const SolverConfig& cfg) {
  if (phi1_of_s.size() < 3)
    throw std::invalid_argument("make_family: need at least 3 s samples");
  GeodesicFamily fam;
  fam.epsilon = eps;
  fam.s0 = 0.0;
  fam.ds = 1.0 / static_cast<double>(phi1_of_s.size() - 1);
  fam.phis.reserve(phi1_of_s.size());

  for (size_t k = 0; k < phi1_of_s.size(); ++k) {
    const BoundaryPair b{phi0, phi1_of_s[k]};
    if (k == 0) {
      SolveReport rep = solve_geodesic(b, eps, g, cfg);
      if (!rep.converged) throw std::runtime_error("make_family: first member failed");
      fam.phis.push_back(std::move(rep.phi));
      continue;
    }
    // warm start: previous member shifted to match the new right endpoint
    SpacetimeField init = fam.phis.back();
    const int ns = g.spatial_size();
    for (int j = 0; j < g.nt; ++j) {
      const double t = g.time(j);
      const size_t o = static_cast<size_t>(j) * ns;
      for (int i = 0; i < ns; ++i)
        init[o + i] += t * (phi1_of_s[k][i] - phi1_of_s[k - 1][i]);
    }
    NewtonResult nr = newton_solve(1.0, eps, b, init, g, cfg);
    if (nr.status == NewtonStatus::converged) {
      fam.phis.push_back(std::move(nr.phi));
    } else {
      SolveReport rep = solve_geodesic(b, eps, g, cfg);
      if (!rep.converged) throw std::runtime_error("make_family: member solve failed");
      fam.phis.push_back(std::move(rep.phi));
    }
  }
  return fam;
}

double barrier_constant(const BoundaryPair& b, double eps, double s, const TorusGrid& g) {
  const SpatialField l0 = laplacian(b.phi0, g);
  const SpatialField l1 = laplacian(b.phi1, g);
  double min_lap = 0.0;
  for (int i = 0; i < l0.size(); ++i)
    min_lap = std::min({min_lap, l0[i], l1[i]});
  const double m_min = 1.0 + min_lap;  // > 0 for admissible data

  double grad_gap2 = 0.0;
  std::vector<SpatialField> gd(g.dim);
  SpatialField diff(g.spatial_size());
  for (int i = 0; i < diff.size(); ++i) diff[i] = b.phi0[i] - b.phi1[i];
  for (int a = 0; a < g.dim; ++a) gd[a] = gradient_axis(diff, g, a);
  for (int i = 0; i < diff.size(); ++i) {
    double s2 = 0.0;
    for (int a = 0; a < g.dim; ++a) s2 += gd[a][i] * gd[a][i];
    grad_gap2 = std::max(grad_gap2, s2);
  }

  const double lower_side = (grad_gap2 + 2.0 * eps) / (2.0 * m_min);
  const double upper_side = (s > 0.0) ? (1.0 - s) / (2.0 * s) : 0.0;
  return 1.5 * std::max({lower_side, upper_side, eps});
}

CheckReport check_comparison(const BoundaryPair& b1, const BoundaryPair& b2, double eps,
                             const TorusGrid& g, const SolverConfig& cfg,
                             const ExperimentConfig& xcfg) {
  CheckReport rep;
  rep.name = "comparison";
  rep.seed = xcfg.seed;
  rep.samples = 1;

  const SolveReport r1 = solve_geodesic(b1, eps, g, cfg);
  const SolveReport r2 = solve_geodesic(b2, eps, g, cfg);
  if (!r1.converged || !r2.converged)
    throw std::runtime_error("check_comparison: solve failed");

  const double interior_gap = sup_diff(r1.phi.v, r2.phi.v);
  const double boundary_gap = std::max(sup_diff(b1.phi0.v, b2.phi0.v),
                                       sup_diff(b1.phi1.v, b2.phi1.v));
  rep.worst_violation = interior_gap - boundary_gap;
  rep.slack_used = xcfg.c_slack * (g.h * g.h + g.dt * g.dt) + 2.0 * cfg.newton_tol;
  rep.passed = rep.worst_violation <= rep.slack_used;
  rep.details = "sup|Phi-Psi| = " + fmt(interior_gap) + ", boundary bound = " +
                fmt(boundary_gap) + ", eps = " + fmt(eps);
  return rep;
}

CheckReport check_barriers(const SolveReport& rep_in, const BoundaryPair& b, double a,
                           const TorusGrid& g, double rounding_slack) {
  CheckReport rep;
  rep.name = "barriers";
  rep.samples = 1;

  const int ns = g.spatial_size();
  double worst = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.nt; ++j) {
    const double t = g.time(j);
    const double bump = a * t * (1.0 - t);
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) {
      const double chord = (1.0 - t) * b.phi0[i] + t * b.phi1[i];
      const double upper = chord + bump;
      const double lower = chord - bump;
      const double phi = rep_in.phi[o + i];
      worst = std::max(worst, std::max(phi - upper, lower - phi));
    }
  }
  rep.worst_violation = worst;
  rep.slack_used = rounding_slack;
  rep.passed = worst <= rounding_slack;
  rep.details = "a = " + fmt(a);
  return rep;
}

CheckReport check_triangle(const SpatialField& psi, const SpatialField& phi0,
                           const SpatialField& phi1, double eps, const TorusGrid& g,
                           const SolverConfig& cfg, const ExperimentConfig& xcfg) {
  CheckReport rep;
  rep.name = "triangle";
  rep.seed = xcfg.seed;
  rep.samples = 1;

  const double d_psi_0 = geodesic_distance(psi, phi0, eps, g, cfg);
  const double d_0_1 = geodesic_distance(phi0, phi1, eps, g, cfg);
  const double d_psi_1 = geodesic_distance(psi, phi1, eps, g, cfg);

  rep.worst_violation = d_psi_1 - d_psi_0 - d_0_1;
  rep.slack_used = disc_slack(xcfg, eps, g);
  rep.passed = rep.worst_violation <= rep.slack_used;
  rep.details = "d(psi,phi1) = " + fmt(d_psi_1) + ", d(psi,phi0) = " + fmt(d_psi_0) +
                ", d(phi0,phi1) = " + fmt(d_0_1) + ", eps = " + fmt(eps);
  return rep;
}

CheckReport check_cat0(const SpatialField& A, const SpatialField& B, const SpatialField& C,
                       const std::vector<double>& lambdas, double eps, const TorusGrid& g,
                       const SolverConfig& cfg, const ExperimentConfig& xcfg) {
  CheckReport rep;
  rep.name = "cat0";
  rep.seed = xcfg.seed;
  rep.samples = static_cast<long>(lambdas.size());

  const SolveReport bc = solve_geodesic(BoundaryPair{B, C}, eps, g, cfg);
  if (!bc.converged) throw std::runtime_error("check_cat0: B-C solve failed");
  const double dBC = distance(bc.phi, g);
  const double dAB = geodesic_distance(A, B, eps, g, cfg);
  const double dAC = geodesic_distance(A, C, eps, g, cfg);

  const double scale = std::max({1.0, dAB * dAB, dAC * dAC, dBC * dBC});
  rep.slack_used = disc_slack(xcfg, eps, g) * scale;

  std::ostringstream det;
  double worst = -std::numeric_limits<double>::infinity();
  for (double lam : lambdas) {
    if (lam < 0.0 || lam > 1.0)
      throw std::invalid_argument("check_cat0: lambda outside [0,1]");
    const int j = static_cast<int>(std::lround(lam * (g.nt - 1)));
    const double lam_snap = g.time(j);
    double dAP = 0.0;
    if (j == 0) {
      dAP = dAB;
    } else if (j == g.nt - 1) {
      dAP = dAC;
    } else {
      const SpatialField P = slice_copy(bc.phi, g, j);
      dAP = geodesic_distance(A, P, eps, g, cfg);
    }
    const double rhs = (1.0 - lam_snap) * dAB * dAB + lam_snap * dAC * dAC -
                       lam_snap * (1.0 - lam_snap) * dBC * dBC;
    const double viol = dAP * dAP - rhs;
    worst = std::max(worst, viol);
    det << "lambda=" << fmt(lam_snap) << " d2(A,P)=" << fmt(dAP * dAP)
        << " rhs=" << fmt(rhs) << "; ";
  }
  rep.worst_violation = worst;
  rep.passed = worst <= rep.slack_used;
  rep.details = det.str() + "eps = " + fmt(eps);
  return rep;
}

CheckReport check_jacobi(const GeodesicFamily& fam, const TorusGrid& g,
                         const ExperimentConfig& xcfg) {
  CheckReport rep;
  rep.name = "jacobi";
  rep.seed = xcfg.seed;
  if (fam.samples() < 3)
    throw std::invalid_argument("check_jacobi: need at least 3 s samples");
  rep.samples = fam.samples();
  rep.slack_used = xcfg.c_slack * (fam.epsilon + g.dt * g.dt + fam.ds * fam.ds);

  double worst = -std::numeric_limits<double>::infinity();
  double worst_convexity = 0.0, worst_endpoint = 0.0;
  const double idt2 = 1.0 / (g.dt * g.dt);

  for (int si = 1; si + 1 < fam.samples(); ++si) {
    std::vector<double> norm(g.nt);
    for (int j = 0; j < g.nt; ++j) norm[j] = jacobi_norm(fam, si, j, g);

    // convexity of |Y(t)|: normalized second differences stay >= -slack
    for (int j = 1; j + 1 < g.nt; ++j) {
      const double d2 = (norm[j + 1] - 2.0 * norm[j] + norm[j - 1]) * idt2;
      worst = std::max(worst, -d2);
      worst_convexity = std::max(worst_convexity, -d2);
    }

    // endpoint inequality <Y, D_X Y> >= <Y, Y> at t = 1 (Y(0) = 0)
    const SpacetimeField y = family_s_derivative(fam, si, g);
    const SpacetimeField dxy = covariant_derivative(fam.phis[si], y, g);
    const int last = g.nt - 1;
    const SpatialField base = slice_copy(fam.phis[si], g, last);
    const SpatialField y1 = slice_copy(y, g, last);
    const SpatialField dxy1 = slice_copy(dxy, g, last);
    const double yy = metric_pairing(base, y1, y1, g);
    const double ydy = metric_pairing(base, y1, dxy1, g);
    worst = std::max(worst, yy - ydy);
    worst_endpoint = std::max(worst_endpoint, yy - ydy);
  }

  rep.worst_violation = worst;
  rep.passed = worst <= rep.slack_used;
  rep.details = "worst -d2|Y| = " + fmt(worst_convexity) + ", worst <Y,Y>-<Y,DY> = " +
                fmt(worst_endpoint) + ", eps = " + fmt(fam.epsilon) +
                ", ds = " + fmt(fam.ds);
  return rep;
}

namespace {

double energy_drift(const SpacetimeField& phi, const TorusGrid& g) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j < g.nt; ++j) {
    const double e = energy_element(phi, j, g);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return hi - lo;
}

}  // namespace

CheckReport check_energy_constancy(const SolveReport& rep_in, const BoundaryPair& b,
                                   const TorusGrid& g, const SolverConfig& cfg) {
  CheckReport rep;
  rep.name = "energy";
  rep.samples = 2;
  if (!rep_in.converged)
    throw std::invalid_argument("check_energy_constancy: needs a converged solution");

  const double eps = rep_in.epsilon;
  const double drift_full = energy_drift(rep_in.phi, g);

  const NewtonResult nr = newton_solve(1.0, 0.5 * eps, b, rep_in.phi, g, cfg);
  SpacetimeField half;
  if (nr.status == NewtonStatus::converged) {
    half = nr.phi;
  } else {
    SolveReport r = solve_geodesic(b, 0.5 * eps, g, cfg);
    if (!r.converged) throw std::runtime_error("check_energy_constancy: eps/2 solve failed");
    half = std::move(r.phi);
  }
  const double drift_half = energy_drift(half, g);

  const double floor = 10.0 * cfg.newton_tol;
  rep.slack_used = 0.0;
  if (drift_full < floor && drift_half < floor) {
    rep.passed = true;
    rep.worst_violation = 0.0;
    rep.details = "both drifts below noise floor " + fmt(floor) + "; auto-pass";
    return rep;
  }
  const double ratio = drift_half / drift_full;
  rep.worst_violation = std::max(ratio - 0.75, 0.25 - ratio);
  rep.passed = rep.worst_violation <= 0.0;
  rep.details = "drift(eps) = " + fmt(drift_full) + ", drift(eps/2) = " + fmt(drift_half) +
                ", ratio = " + fmt(ratio) + ", eps = " + fmt(eps);
  return rep;
}

CheckReport check_lower_bound(const SpatialField& phi, double eps, const TorusGrid& g,
                              const SolverConfig& cfg, const ExperimentConfig& xcfg) {
  CheckReport rep;
  rep.name = "lowerbound";
  rep.seed = xcfg.seed;
  rep.samples = 1;

  const double mean = integrate_spatial(phi, g);
  if (std::abs(mean) > 1e-10 * std::max(1.0, sup_norm(phi.v)))
    throw std::invalid_argument("check_lower_bound: phi must be normalized (mean zero)");

  const SpatialField zero(g.spatial_size());
  const SolveReport sol = solve_geodesic(BoundaryPair{zero, phi}, eps, g, cfg);
  if (!sol.converged) throw std::runtime_error("check_lower_bound: solve failed");
  const double d = distance(sol.phi, g);

  const SpatialField lap = laplacian(phi, g);
  double pos = 0.0, neg = 0.0;
  double cell = g.h;
  for (int k = 1; k < g.dim; ++k) cell *= g.h;
  for (int i = 0; i < phi.size(); ++i) {
    if (phi[i] > 0.0) pos += phi[i] * phi[i] * (1.0 + lap[i]) * cell;
    if (phi[i] < 0.0) neg += phi[i] * phi[i] * cell;
  }
  const double bound = std::max(std::sqrt(std::max(0.0, pos)), std::sqrt(neg));

  rep.worst_violation = bound - d;
  rep.slack_used = disc_slack(xcfg, eps, g);
  rep.passed = rep.worst_violation <= rep.slack_used;
  rep.details = "d(0,phi) = " + fmt(d) + ", bound = " + fmt(bound) + ", eps = " + fmt(eps);
  return rep;
}

namespace {

// Random symmetric matrix with entries in [-1,1]; A00 shifted positive.
SymMatrix random_sym(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  SymMatrix A(n);
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) A.set_sym(i, j, dist(rng));
  return A;
}

// Rejection sample A with A00 > 0 and Q(A) comfortably positive; magnitudes
// O(1) keep the rounding analysis honest.
SymMatrix random_positive_q(std::mt19937_64& rng, int n) {
  for (;;) {
    SymMatrix A = random_sym(rng, n);
    A.at(0, 0) = std::abs(A.at(0, 0)) + 0.5;
    if (matrix_q(A) >= 0.05) return A;
  }
}

}  // namespace

CheckReport check_concavity(long samples, uint64_t seed) {
  CheckReport rep;
  rep.name = "concavity";
  rep.samples = samples;
  rep.seed = seed;
  rep.slack_used = 1e-10;
  if (samples < 1) throw std::invalid_argument("check_concavity: samples must be >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 2.0);

  double worst_pd = -std::numeric_limits<double>::infinity();  // -Q(A), A > 0
  double worst_segment = worst_pd;                             // Q(A) - Q(sA+(1-s)B)
  double worst_diff = worst_pd;                                // Q(A-B)
  double worst_mid = worst_pd;                                 // (f1+f2)/2 - f(mid)

  for (long it = 0; it < samples; ++it) {
    const int n = 1 + static_cast<int>(it % 4);

    // 1. positive definite implies Q > 0; definiteness certified by a
    //    pivoted factorization.
    {
      const int m = n + 1;
      Eigen::MatrixXd M(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) M(i, j) = unit(rng);
      Eigen::MatrixXd S = M.transpose() * M + 0.1 * Eigen::MatrixXd::Identity(m, m);
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        SymMatrix A(n);
        for (int i = 0; i <= n; ++i)
          for (int j = 0; j <= n; ++j) A.at(i, j) = S(i, j);
        worst_pd = std::max(worst_pd, -matrix_q(A));
      }
    }

    // 2. equal-Q pair: Q(sigma A + (1-sigma) B) >= Q(A) and Q(A-B) <= 0.
    {
      SymMatrix A = random_positive_q(rng, n);
      SymMatrix B = random_positive_q(rng, n);
      const double scale = std::sqrt(matrix_q(A) / matrix_q(B));
      for (double& x : B.a) x *= scale;
      const double qa = matrix_q(A);
      for (int k = 0; k <= 10; ++k) {
        const double sigma = k / 10.0;
        SymMatrix M(n);
        for (size_t i = 0; i < M.a.size(); ++i)
          M.a[i] = sigma * A.a[i] + (1.0 - sigma) * B.a[i];
        worst_segment = std::max(worst_segment, qa - matrix_q(M));
      }
      SymMatrix D(n);
      for (size_t i = 0; i < D.a.size(); ++i) D.a[i] = A.a[i] - B.a[i];
      worst_diff = std::max(worst_diff, matrix_q(D));
    }

    // 3. midpoint concavity of log(xy - sum z^2).
    {
      auto sample_point = [&](std::vector<double>& z) -> std::pair<double, double> {
        for (;;) {
          const double x = pos(rng);
          const double y = pos(rng);
          for (double& zi : z) zi = unit(rng);
          double z2 = 0.0;
          for (double zi : z) z2 += zi * zi;
          if (x * y - z2 >= 0.05) return {x, y};
        }
      };
      std::vector<double> z1(n), z2(n), zm(n);
      const auto [x1, y1] = sample_point(z1);
      const auto [x2, y2] = sample_point(z2);
      for (int i = 0; i < n; ++i) zm[i] = 0.5 * (z1[i] + z2[i]);
      const double f1 = log_q(x1, y1, z1);
      const double f2 = log_q(x2, y2, z2);
      const double fm = log_q(0.5 * (x1 + x2), 0.5 * (y1 + y2), zm);
      worst_mid = std::max(worst_mid, 0.5 * (f1 + f2) - fm);
    }
  }

  rep.worst_violation = std::max({worst_pd, worst_segment, worst_diff, worst_mid});
  rep.passed = rep.worst_violation <= rep.slack_used;
  rep.details = "worst -Q(PD) = " + fmt(worst_pd) + ", worst Q(A)-Q(seg) = " +
                fmt(worst_segment) + ", worst Q(A-B) = " + fmt(worst_diff) +
                ", worst midpoint = " + fmt(worst_mid);
  return rep;
}

WeakC2Monitors weak_c2_monitors(const SpacetimeField& phi, const TorusGrid& g) {
  WeakC2Monitors m;
  for (int j = 0; j < g.nt; ++j) {
    const SpatialField lap = laplacian(slice_copy(phi, g, j), g);
    m.sup_lap = std::max(m.sup_lap, sup_norm(lap.v));
  }
  const TimeDerivatives d = time_derivatives(phi, g);
  m.sup_tt = interior_sup(d.tt, g);
  const int ns = g.spatial_size();
  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) {
      double s2 = 0.0;
      for (int a = 0; a < g.dim; ++a) s2 += d.tk[a][o + i] * d.tk[a][o + i];
      m.sup_grad_t = std::max(m.sup_grad_t, std::sqrt(s2));
    }
  }
  return m;
}

CheckReport convergence_study(const BoundaryPair& b, const std::vector<double>& eps_schedule,
                              const TorusGrid& g, const SolverConfig& cfg) {
  CheckReport rep;
  rep.name = "converge";
  if (eps_schedule.size() < 3)
    throw std::invalid_argument("convergence_study: schedule needs at least 3 entries");
  rep.samples = static_cast<long>(eps_schedule.size());

  SolverConfig c = cfg;
  c.eps_schedule = eps_schedule;
  const auto reports = continuation_in_eps(b, g, c);
  if (reports.size() != eps_schedule.size() || !reports.back().converged)
    throw std::runtime_error("convergence_study: epsilon sweep failed");

  std::vector<double> dists;
  std::vector<WeakC2Monitors> mons;
  std::ostringstream table;
  table << "eps, sup_dist_prev, sup_lap, sup_tt, sup_grad_t\n";
  for (size_t k = 0; k < reports.size(); ++k) {
    mons.push_back(weak_c2_monitors(reports[k].phi, g));
    if (k > 0) dists.push_back(reports[k].dist_from_prev);
    table << fmt(reports[k].epsilon) << ", "
          << (k > 0 ? fmt(reports[k].dist_from_prev) : std::string("-")) << ", "
          << fmt(mons.back().sup_lap) << ", " << fmt(mons.back().sup_tt) << ", "
          << fmt(mons.back().sup_grad_t) << "\n";
  }

  double worst_increase = -std::numeric_limits<double>::infinity();
  for (size_t k = 1; k < dists.size(); ++k)
    worst_increase = std::max(worst_increase, dists[k] - dists[k - 1]);

  // monitor variation across the lower (small-eps) half of the schedule
  const size_t half = reports.size() / 2;
  double worst_variation = 0.0;
  for (int which = 0; which < 3; ++which) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (size_t k = half; k < mons.size(); ++k) {
      const double v = which == 0 ? mons[k].sup_lap
                      : which == 1 ? mons[k].sup_tt
                                   : mons[k].sup_grad_t;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi > 0.0) worst_variation = std::max(worst_variation, (hi - lo) / hi);
  }

  rep.worst_violation = std::max(worst_increase, worst_variation - 0.10);
  rep.slack_used = 0.0;
  rep.passed = rep.worst_violation <= 0.0;
  rep.details = "monitor variation (lower half) = " + fmt(worst_variation) + "\n" + table.str();
  return rep;
}

}  // namespace volform
