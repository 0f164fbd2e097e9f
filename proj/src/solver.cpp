#include "volform/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace volform {

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("solver: epsilon must be positive");
  if (s_steps < 1) throw std::invalid_argument("solver: s_steps must be >= 1");
  if (!(newton_tol > 0.0) || !(linear_rel_tol > 0.0))
    throw std::invalid_argument("solver: tolerances must be positive");
  if (!(ellipticity_guard > 0.0))
    throw std::invalid_argument("solver: ellipticity_guard must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw std::invalid_argument("solver: backtrack_factor must lie in (0,1)");
}

std::vector<double> default_eps_schedule() {
  std::vector<double> s;
  for (double e = 1.0; e >= 0.5 * std::pow(2.0, -10); e *= 0.5) s.push_back(e);
  return s;
}

SpacetimeField linear_in_time(const BoundaryPair& b, const TorusGrid& g) {
  const int ns = g.spatial_size();
  SpacetimeField phi(g.total_size());
  for (int j = 0; j < g.nt; ++j) {
    const double t = g.time(j);
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) phi[o + i] = (1.0 - t) * b.phi0[i] + t * b.phi1[i];
  }
  // boundary slices exactly equal to the data
  set_time_slice(phi, g, 0, b.phi0);
  set_time_slice(phi, g, g.nt - 1, b.phi1);
  return phi;
}

namespace {

// Row index of the interior unknown (time j, spatial i).
inline int row_of(int j, int i, int ns) { return (j - 1) * ns + i; }

Eigen::SparseMatrix<double> assemble_dp(const OperatorCoefficients& co, const TorusGrid& g) {
  const int ns = g.spatial_size();
  const int nt = g.nt;
  const int nrows = (nt - 2) * ns;
  const double idt2 = 1.0 / (g.dt * g.dt);
  const double ih2 = 1.0 / (g.h * g.h);
  const double i4dth = 1.0 / (4.0 * g.dt * g.h);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(nrows) * (3 + 6 * g.dim));

  for (int j = 1; j < nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) {
      const int r = row_of(j, i, ns);
      const double a = co.a[o + i];
      const double bb = co.b[o + i];

      trip.emplace_back(r, r, -2.0 * bb * idt2 - 2.0 * g.dim * a * ih2);
      if (j + 1 < nt - 1) trip.emplace_back(r, row_of(j + 1, i, ns), bb * idt2);
      if (j - 1 > 0) trip.emplace_back(r, row_of(j - 1, i, ns), bb * idt2);

      for (int ax = 0; ax < g.dim; ++ax) {
        const int ip = g.neighbor(i, ax, +1);
        const int im = g.neighbor(i, ax, -1);
        trip.emplace_back(r, row_of(j, ip, ns), a * ih2);
        trip.emplace_back(r, row_of(j, im, ns), a * ih2);

        const double cm = -2.0 * co.c[ax][o + i] * i4dth;  // weight of h(j+1, i+e)
        if (j + 1 < nt - 1) {
          trip.emplace_back(r, row_of(j + 1, ip, ns), cm);
          trip.emplace_back(r, row_of(j + 1, im, ns), -cm);
        }
        if (j - 1 > 0) {
          trip.emplace_back(r, row_of(j - 1, ip, ns), -cm);
          trip.emplace_back(r, row_of(j - 1, im, ns), cm);
        }
      }
    }
  }

  Eigen::SparseMatrix<double> mat(nrows, nrows);
  mat.setFromTriplets(trip.begin(), trip.end());
  mat.makeCompressed();
  return mat;
}

}  // namespace

SpacetimeField solve_dp_linear(const OperatorCoefficients& co, const SpacetimeField& rhs,
                               const TorusGrid& g, double rel_tol) {
  const int ns = g.spatial_size();
  const int nrows = (g.nt - 2) * ns;

  Eigen::VectorXd bvec(nrows);
  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) bvec[row_of(j, i, ns)] = rhs[o + i];
  }

  const double rhs_sup = bvec.lpNorm<Eigen::Infinity>();
  SpacetimeField h(g.total_size());
  if (rhs_sup == 0.0) return h;

  const Eigen::SparseMatrix<double> mat = assemble_dp(co, g);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(mat);
  lu.factorize(mat);
  if (lu.info() != Eigen::Success)
    throw LinearSolveError("linear solve: factorization failed (operator singular?)");
  const Eigen::VectorXd x = lu.solve(bvec);
  if (lu.info() != Eigen::Success) throw LinearSolveError("linear solve: back substitution failed");

  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) h[o + i] = x[row_of(j, i, ns)];
  }

  // Verify against the matrix-free operator; the assembled matrix is an
  // internal detail, dp_apply is the contract.
  const SpacetimeField check = dp_apply(co, h, g);
  double err = 0.0;
  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) err = std::max(err, std::abs(check[o + i] - rhs[o + i]));
  }
  if (err > rel_tol * rhs_sup)
    throw LinearSolveError("linear solve: relative residual " + std::to_string(err / rhs_sup) +
                               " exceeds tolerance " + std::to_string(rel_tol),
                           {err / rhs_sup});
  return h;
}

namespace {

SpacetimeField interior_residual(double s, double eps, const SpacetimeField& phi,
                                 const TorusGrid& g) {
  SpacetimeField r = p_op(s, phi, g);
  const int ns = g.spatial_size();
  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) r[o + i] -= eps;
  }
  return r;
}

}  // namespace

SpacetimeField solve_s0(const BoundaryPair& b, double eps, const TorusGrid& g,
                        const SolverConfig& cfg) {
  validate_boundary(b, g);
  SpacetimeField phi = linear_in_time(b, g);
  // p_op(0, .) is affine, so one exact linear step solves it.
  SpacetimeField r = interior_residual(0.0, eps, phi, g);
  for (double& x : r.v) x = -x;
  const OperatorCoefficients co = operator_coefficients(0.0, phi, g);
  const SpacetimeField h = solve_dp_linear(co, r, g, cfg.linear_rel_tol);
  for (int i = 0; i < phi.size(); ++i) phi[i] += h[i];
  set_time_slice(phi, g, 0, b.phi0);
  set_time_slice(phi, g, g.nt - 1, b.phi1);
  return phi;
}

NewtonResult newton_solve(double s, double eps, const BoundaryPair& b,
                          const SpacetimeField& init, const TorusGrid& g,
                          const SolverConfig& cfg) {
  NewtonResult res;
  res.phi = init;
  set_time_slice(res.phi, g, 0, b.phi0);
  set_time_slice(res.phi, g, g.nt - 1, b.phi1);

  if (ellipticity_margins(s, res.phi, g).worst() < cfg.ellipticity_guard) {
    res.status = NewtonStatus::step_failure;
    return res;
  }

  SpacetimeField resid = interior_residual(s, eps, res.phi, g);
  res.residual_sup = interior_sup(resid, g);
  res.residual_trace.push_back(res.residual_sup);

  for (int it = 0; it < cfg.newton_max_iters; ++it) {
    if (res.residual_sup <= cfg.newton_tol) {
      res.status = NewtonStatus::converged;
      return res;
    }

    const OperatorCoefficients co = operator_coefficients(s, res.phi, g);
    SpacetimeField rhs = resid;
    for (double& x : rhs.v) x = -x;

    SpacetimeField h;
    try {
      h = solve_dp_linear(co, rhs, g, cfg.linear_rel_tol);
    } catch (const LinearSolveError&) {
      res.status = NewtonStatus::linear_failure;
      return res;
    }

    // Backtracking on the residual sup norm with an ellipticity guard.
    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1e-12) {
      SpacetimeField cand = res.phi;
      for (int i = 0; i < cand.size(); ++i) cand[i] += alpha * h[i];
      set_time_slice(cand, g, 0, b.phi0);
      set_time_slice(cand, g, g.nt - 1, b.phi1);

      if (ellipticity_margins(s, cand, g).worst() >= cfg.ellipticity_guard) {
        SpacetimeField cand_resid = interior_residual(s, eps, cand, g);
        const double cand_sup = interior_sup(cand_resid, g);
        if (cand_sup <= (1.0 - 1e-4 * alpha) * res.residual_sup) {
          res.phi = std::move(cand);
          resid = std::move(cand_resid);
          res.residual_sup = cand_sup;
          accepted = true;
          break;
        }
      }
      alpha *= cfg.backtrack_factor;
    }
    if (!accepted) {
      res.status = NewtonStatus::step_failure;
      res.iterations = it;
      return res;
    }
    res.iterations = it + 1;
    res.residual_trace.push_back(res.residual_sup);
  }

  if (res.residual_sup <= cfg.newton_tol) {
    res.status = NewtonStatus::converged;
  } else {
    res.status = NewtonStatus::max_iterations;
  }
  return res;
}

namespace {

void finalize_report(SolveReport& rep, double s, const TorusGrid& g, const SolverConfig& cfg) {
  rep.margins = ellipticity_margins(s, rep.phi, g);
  rep.converged = rep.residual_sup <= cfg.newton_tol &&
                  rep.margins.worst() >= cfg.ellipticity_guard;
  // Tie break: margins sitting at the guard converge with a warning and
  // downstream geometry clamps 1+lap(phi) at the guard.
  if (rep.converged && rep.margins.worst() <= cfg.ellipticity_guard + cfg.newton_tol) {
    rep.margin_warning = true;
    rep.note += "margins at ellipticity guard; ";
  }
}

}  // namespace

SolveReport continuation_in_s(const BoundaryPair& b, double eps, const TorusGrid& g,
                              const SolverConfig& cfg) {
  cfg.validate();
  validate_boundary(b, g);

  SolveReport rep;
  rep.epsilon = eps;
  rep.phi = solve_s0(b, eps, g, cfg);
  rep.s_trace.push_back(0.0);
  rep.newton_iters.push_back(0);
  rep.step_margins.push_back(ellipticity_margins(0.0, rep.phi, g));
  rep.s_reached = 0.0;

  const double base_step = 1.0 / static_cast<double>(cfg.s_steps);
  double step = base_step;
  double s = 0.0;

  while (s < 1.0) {
    const double target = std::min(1.0, s + step);
    const NewtonResult nr = newton_solve(target, eps, b, rep.phi, g, cfg);
    if (nr.status == NewtonStatus::converged) {
      rep.phi = nr.phi;
      rep.residual_sup = nr.residual_sup;
      s = target;
      rep.s_reached = s;
      rep.s_trace.push_back(s);
      rep.newton_iters.push_back(nr.iterations);
      rep.step_margins.push_back(ellipticity_margins(s, rep.phi, g));
      step = std::min(base_step, 2.0 * step);
    } else {
      step *= 0.5;
      if (step < cfg.min_s_step) {
        rep.converged = false;
        rep.note = "continuation stalled at s = " + std::to_string(s) +
                   " (s-step below minimum)";
        rep.margins = ellipticity_margins(s, rep.phi, g);
        return rep;
      }
    }
  }

  finalize_report(rep, 1.0, g, cfg);
  return rep;
}

std::vector<SolveReport> continuation_in_eps(const BoundaryPair& b, const TorusGrid& g,
                                             const SolverConfig& cfg) {
  if (cfg.eps_schedule.empty())
    throw std::invalid_argument("epsilon continuation: schedule must not be empty");
  for (size_t i = 0; i + 1 < cfg.eps_schedule.size(); ++i)
    if (!(cfg.eps_schedule[i + 1] < cfg.eps_schedule[i]))
      throw std::invalid_argument("epsilon continuation: schedule must be strictly decreasing");
  if (cfg.eps_schedule.front() > 1.0)
    throw std::invalid_argument("epsilon continuation: schedule must start at <= 1");
  validate_boundary(b, g);

  std::vector<SolveReport> reports;
  reports.reserve(cfg.eps_schedule.size());

  SolveReport first = continuation_in_s(b, cfg.eps_schedule.front(), g, cfg);
  reports.push_back(std::move(first));
  if (!reports.back().converged) return reports;

  for (size_t k = 1; k < cfg.eps_schedule.size(); ++k) {
    const double eps_target = cfg.eps_schedule[k];
    double eps_cur = reports.back().epsilon;
    SpacetimeField warm = reports.back().phi;

    // Warm Newton at s=1; on failure bisect the epsilon gap geometrically.
    SolveReport rep;
    rep.epsilon = eps_target;
    bool ok = false;
    int guard_iters = 0;
    double eps_next = eps_target;
    while (guard_iters++ < 60) {
      const NewtonResult nr = newton_solve(1.0, eps_next, b, warm, g, cfg);
      if (nr.status == NewtonStatus::converged) {
        warm = nr.phi;
        eps_cur = eps_next;
        if (eps_next == eps_target) {
          rep.phi = std::move(warm);
          rep.residual_sup = nr.residual_sup;
          rep.s_trace = {1.0};
          rep.newton_iters = {nr.iterations};
          rep.s_reached = 1.0;
          ok = true;
          break;
        }
        eps_next = eps_target;
      } else {
        const double mid = std::sqrt(eps_cur * eps_next);
        if (mid / eps_next < 1.0 + 1e-9) break;
        eps_next = mid;
      }
    }

    if (!ok) {
      rep.converged = false;
      rep.note = "epsilon continuation failed at eps = " + std::to_string(eps_target);
      rep.phi = reports.back().phi;
      reports.push_back(std::move(rep));
      return reports;
    }

    finalize_report(rep, 1.0, g, cfg);
    rep.dist_from_prev = sup_diff(rep.phi.v, reports.back().phi.v);
    reports.push_back(std::move(rep));
    if (!reports.back().converged) return reports;
  }
  return reports;
}

}  // namespace volform
