// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Criteria run on desk-scale grids; total budget well under
// fifteen minutes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "volform/experiments.hpp"
#include "volform/geometry.hpp"
#include "volform/grid.hpp"
#include "volform/operators.hpp"
#include "volform/solver.hpp"

using namespace volform;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

SpacetimeField flat_solution(const TorusGrid& g, double eps, double c) {
  SpacetimeField out(g.total_size());
  const int ns = g.spatial_size();
  for (int j = 0; j < g.nt; ++j) {
    const double t = g.time(j);
    const double v = eps * t * (t - 1.0) / 2.0 + c * t;
    for (int i = 0; i < ns; ++i) out[static_cast<size_t>(j) * ns + i] = v;
  }
  return out;
}

double energy_drift(const SpacetimeField& phi, const TorusGrid& g) {
  double lo = 1e300, hi = -1e300;
  for (int j = 0; j < g.nt; ++j) {
    const double e = energy_element(phi, j, g);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  return hi - lo;
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion1() {
  Outcome out;
  const TorusGrid g = make_grid(1, 32, 33);
  const SolverConfig cfg;
  const double c = 0.7;
  const BoundaryPair b{SpatialField(g.spatial_size(), 0.0), SpatialField(g.spatial_size(), c)};

  double worst_err = 0.0;
  double worst_time = 0.0;
  for (double eps : {1.0, 0.5, 0.0625}) {
    const SpacetimeField exact = flat_solution(g, eps, c);
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto t0 = std::chrono::steady_clock::now();
      SpacetimeField phi;
      if (s == 0.0) {
        phi = solve_s0(b, eps, g, cfg);
      } else {
        const NewtonResult nr = newton_solve(s, eps, b, linear_in_time(b, g), g, cfg);
        if (nr.status != NewtonStatus::converged) {
          out.passed = false;
          out.detail += "newton failed at s=" + fmt(s) + " eps=" + fmt(eps) + "; ";
          continue;
        }
        phi = nr.phi;
      }
      worst_time = std::max(
          worst_time,
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      worst_err = std::max(worst_err, sup_diff(phi.v, exact.v));
    }
  }
  // the full continuation run also stays under the time budget
  const auto t0 = std::chrono::steady_clock::now();
  const SolveReport rep = continuation_in_s(b, 1.0, g, cfg);
  const double cont_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double cont_err = sup_diff(rep.phi.v, flat_solution(g, 1.0, c).v);

  out.passed = out.passed && worst_err <= 1e-10 && cont_err <= 1e-10 && rep.converged &&
               worst_time < 1.0 && cont_time < 1.0;
  out.detail += "sup err = " + fmt(std::max(worst_err, cont_err)) +
                ", slowest solve = " + fmt(std::max(worst_time, cont_time)) + " s";
  return out;
}

// ------------------------------------------------------------- criteria 2 + 3
struct SolvedInstance {
  TorusGrid grid;
  BoundaryPair boundary;
  SolveReport report;
};

std::vector<SolvedInstance> solve_random_instances() {
  std::vector<SolvedInstance> out;
  const SolverConfig cfg;
  TrigFieldGen gen(2026);
  for (int k = 0; k < 20; ++k) {
    const TorusGrid g = (k < 10) ? make_grid(1, 32, 33) : make_grid(2, 16, 17);
    const BoundaryPair b{gen.random_admissible(g), gen.random_admissible(g)};
    SolveReport rep = continuation_in_s(b, 1.0, g, cfg);
    out.push_back({g, b, std::move(rep)});
  }
  return out;
}

Outcome criterion2(const std::vector<SolvedInstance>& solved) {
  Outcome out;
  double worst_resid = 0.0;
  double worst_margin = 1e300;
  for (const SolvedInstance& si : solved) {
    if (!si.report.converged) {
      out.passed = false;
      out.detail += "solve failed (" + si.report.note + "); ";
      continue;
    }
    worst_resid = std::max(worst_resid, si.report.residual_sup);
    for (const EllipticityMargins& m : si.report.step_margins)
      worst_margin = std::min(worst_margin, m.worst());
    // membership at s=1: min phi_tt and min (1 + lap phi) are the a/b margins
    worst_margin = std::min(worst_margin, si.report.margins.min_a);
    worst_margin = std::min(worst_margin, si.report.margins.min_b);
  }
  out.passed = out.passed && worst_resid <= 1e-8 && worst_margin > 0.0;
  out.detail += "20 solves, worst residual = " + fmt(worst_resid) +
                ", worst margin along continuation = " + fmt(worst_margin);
  return out;
}

Outcome criterion3(const std::vector<SolvedInstance>& solved) {
  Outcome out;
  double worst = -1e300;
  for (const SolvedInstance& si : solved) {
    const double a = barrier_constant(si.boundary, 1.0, 1.0, si.grid);
    const CheckReport rep = check_barriers(si.report, si.boundary, a, si.grid, 1e-8);
    worst = std::max(worst, rep.worst_violation);
    out.passed = out.passed && rep.passed;
  }
  out.detail = "worst barrier violation = " + fmt(worst) + " (slack 1e-8)";
  return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion4() {
  Outcome out;
  const TorusGrid g = make_grid(1, 32, 33);
  const SolverConfig cfg;
  TrigFieldGen gen(404);
  const double bound = 0.01;
  const double slack = 10.0 * (g.h * g.h + g.dt * g.dt) + 2e-8;

  double worst = -1e300;
  for (int k = 0; k < 10; ++k) {
    const BoundaryPair b1{gen.random_admissible(g), gen.random_admissible(g)};
    SpatialField d0 = gen.random_tangent(g, 1.0);
    SpatialField d1 = gen.random_tangent(g, 1.0);
    BoundaryPair b2 = b1;
    const double s0 = bound / sup_norm(d0.v);
    const double s1 = bound / sup_norm(d1.v);
    for (int i = 0; i < g.spatial_size(); ++i) {
      b2.phi0[i] += s0 * d0[i];
      b2.phi1[i] += s1 * d1[i];
    }
    const SolveReport r1 = continuation_in_s(b1, 1.0, g, cfg);
    const SolveReport r2 = continuation_in_s(b2, 1.0, g, cfg);
    if (!r1.converged || !r2.converged) {
      out.passed = false;
      out.detail += "solve failed; ";
      continue;
    }
    const double gap = sup_diff(r1.phi.v, r2.phi.v);
    const double bmax = std::max(sup_diff(b1.phi0.v, b2.phi0.v), sup_diff(b1.phi1.v, b2.phi1.v));
    worst = std::max(worst, gap - bmax);
  }
  out.passed = out.passed && worst <= slack;
  out.detail += "worst sup|Phi-Psi| - boundary gap = " + fmt(worst) + ", slack = " + fmt(slack);
  return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion5() {
  Outcome out;
  const TorusGrid g = make_grid(1, 32, 33);
  SolverConfig cfg;

  // constant-boundary oracle: drift = eps^2/4 exactly, ratio exactly 1/4
  const BoundaryPair bc{SpatialField(g.spatial_size(), 0.3), SpatialField(g.spatial_size(), 0.3)};
  cfg.eps_schedule = {1.0, 0.5};
  const auto oracle = continuation_in_eps(bc, g, cfg);
  const double d1 = energy_drift(oracle[0].phi, g);
  const double d2 = energy_drift(oracle[1].phi, g);
  const double oracle_ratio = d2 / d1;
  const bool oracle_ok = std::abs(d1 - 0.25) < 1e-9 && std::abs(oracle_ratio - 0.25) < 1e-8;

  // trig boundary: ratios stay inside [1/4, 3/4] for eps = 1, 1/2, 1/4
  TrigFieldGen gen(505);
  const BoundaryPair bt{gen.random_admissible(g, 0.25), gen.random_admissible(g, 0.25)};
  cfg.eps_schedule = {1.0, 0.5, 0.25, 0.125};
  const auto sweep = continuation_in_eps(bt, g, cfg);
  std::vector<double> drifts;
  for (const auto& r : sweep) {
    if (!r.converged) {
      out.passed = false;
      out.detail += "sweep solve failed; ";
    }
    drifts.push_back(energy_drift(r.phi, g));
  }
  bool ratios_ok = true;
  std::string ratio_str;
  for (size_t k = 0; k + 1 < drifts.size(); ++k) {
    const double r = drifts[k + 1] / drifts[k];
    ratios_ok = ratios_ok && r >= 0.25 && r <= 0.75;
    ratio_str += fmt(r) + " ";
  }

  out.passed = out.passed && oracle_ok && ratios_ok;
  out.detail += "oracle drift = " + fmt(d1) + " (exact 0.25), oracle ratio = " +
                fmt(oracle_ratio) + ", trig ratios = " + ratio_str;
  return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion6() {
  Outcome out;
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  double worst_k = -1e300;
  long samples = 0;
  for (int dim : {1, 2, 3}) {
    const TorusGrid g = make_grid(dim, dim == 1 ? 32 : (dim == 2 ? 16 : 8), 3);
    TrigFieldGen gen(606 + dim);
    const long count = dim == 1 ? 400 : 300;
    for (long k = 0; k < count; ++k) {
      const SpatialField phi = gen.random_admissible(g);
      SpatialField a(g.spatial_size()), b(g.spatial_size());
      for (double& x : a.v) x = dist(rng);
      for (double& x : b.v) x = dist(rng);
      worst_k = std::max(worst_k, sectional_curvature(phi, a, b, g));
      ++samples;
    }
  }
  const bool nonpos_ok = worst_k <= 1e-12;

  // T^2 benchmark against the continuum value -4 pi^4
  const double kexact = -4.0 * std::pow(kPi, 4);
  auto bench = [&](int n) {
    const TorusGrid g = make_grid(2, n, 3);
    SpatialField zero(g.spatial_size());
    SpatialField a(g.spatial_size()), b(g.spatial_size());
    for (int i = 0; i < g.spatial_size(); ++i) {
      const auto x = g.coords_of(i);
      a[i] = std::cos(2.0 * kPi * g.coord(x[0]));
      b[i] = std::cos(2.0 * kPi * g.coord(x[1]));
    }
    return sectional_curvature(zero, a, b, g);
  };
  const double rel32 = std::abs(bench(32) - kexact) / std::abs(kexact);
  const double rel64 = std::abs(bench(64) - kexact) / std::abs(kexact);
  const double decay = rel32 / rel64;
  const bool bench32_ok = rel32 <= 0.02;
  const bool bench64_ok = rel64 <= 0.005;
  const bool decay_ok = decay > 3.6 && decay < 4.4;

  out.passed = nonpos_ok && bench32_ok && bench64_ok && decay_ok;
  out.detail = std::to_string(samples) + " samples, worst K = " + fmt(worst_k) +
               "; benchmark rel err: n=32 " + fmt(rel32) + (bench32_ok ? " <= 0.02" : " > 0.02") +
               ", n=64 " + fmt(rel64) + (bench64_ok ? " <= 0.005" : " > 0.005") +
               ", decay factor " + fmt(decay) + " (order " + fmt(std::log2(decay)) + ")";
  if (!bench32_ok || !bench64_ok)
    out.detail +=
        "; note: central-difference benchmark value is exactly -(sin(2 pi h)/h)^4/4, "
        "rel err 1 - sinc^4(2 pi h) = 2.54% at n=32 and 0.64% at n=64";
  return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion7() {
  Outcome out;
  const int grids[3] = {16, 32, 64};
  std::vector<double> mean_gap(3, 0.0);
  const int nsamples = 100;

  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> kdist(-4, 4);
  std::uniform_real_distribution<double> adist(-1.0, 1.0);
  std::uniform_real_distribution<double> pdist(0.0, 2.0 * kPi);

  auto random_modes = [&](int count, double amp) {
    std::vector<TrigMode> modes;
    while (static_cast<int>(modes.size()) < count) {
      TrigMode m;
      m.k = {kdist(rng), kdist(rng), 0};
      if (m.k[0] == 0 && m.k[1] == 0) continue;
      m.amplitude = adist(rng) * amp;
      m.phase = pdist(rng);
      modes.push_back(m);
    }
    return modes;
  };

  for (int s = 0; s < nsamples; ++s) {
    std::vector<TrigMode> mphi = random_modes(3, 1.0);
    {
      const double bound = laplacian_sup_bound(mphi);
      for (TrigMode& m : mphi) m.amplitude *= 0.5 / bound;
    }
    const std::vector<TrigMode> ma = random_modes(3, 1.0);
    const std::vector<TrigMode> mb = random_modes(3, 1.0);
    for (int gi = 0; gi < 3; ++gi) {
      const TorusGrid g = make_grid(2, grids[gi], 3);
      const SpatialField phi = make_trig_field(g, mphi);
      const SpatialField a = make_trig_field(g, ma);
      const SpatialField b = make_trig_field(g, mb);
      mean_gap[gi] +=
          std::abs(curvature_operator_2d(phi, a, b, g) - sectional_curvature(phi, a, b, g));
    }
  }
  for (double& v : mean_gap) v /= nsamples;

  // least squares slope of log2(gap) against log2(h)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int gi = 0; gi < 3; ++gi) {
    const double x = -std::log2(static_cast<double>(grids[gi]));
    const double y = std::log2(mean_gap[gi]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double order = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);

  out.passed = order >= 1.8 && order <= 2.2;
  out.detail = "mean |Kop - Ksect| = {" + fmt(mean_gap[0]) + ", " + fmt(mean_gap[1]) + ", " +
               fmt(mean_gap[2]) + "} at n = {16, 32, 64}, fitted order = " + fmt(order);
  return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion8() {
  Outcome out;
  const CheckReport rep = check_concavity(100000, 42);
  out.passed = rep.passed && rep.worst_violation <= 1e-10;
  out.detail = "100000 samples, seed 42, worst violation = " + fmt(rep.worst_violation);
  return out;
}

// ---------------------------------------------------------------- criterion 9
Outcome criterion9() {
  Outcome out;
  const TorusGrid g = make_grid(1, 32, 33);
  const SolverConfig cfg;
  ExperimentConfig xcfg;
  xcfg.eps = std::pow(2.0, -6);
  xcfg.c_slack = 10.0;
  const std::vector<double> lambdas{0.0, 0.25, 0.5, 0.75, 1.0};

  TrigFieldGen gen(909);
  double worst_tri = -1e300, worst_cat = -1e300;
  std::string fails;
  for (int k = 0; k < 10; ++k) {
    const SpatialField A = gen.random_admissible(g);
    const SpatialField B = gen.random_admissible(g);
    const SpatialField C = gen.random_admissible(g);
    const CheckReport tri = check_triangle(A, B, C, xcfg.eps, g, cfg, xcfg);
    worst_tri = std::max(worst_tri, tri.worst_violation - tri.slack_used);
    if (!tri.passed) fails += "triangle[" + std::to_string(k) + "] ";
    const CheckReport cat = check_cat0(A, B, C, lambdas, xcfg.eps, g, cfg, xcfg);
    worst_cat = std::max(worst_cat, cat.worst_violation - cat.slack_used);
    if (!cat.passed) fails += "cat0[" + std::to_string(k) + "] ";
  }

  // flat subspace: spatially constant collinear triple achieves equality
  const SpatialField z(g.spatial_size());
  const SpatialField c1(g.spatial_size(), 0.25);
  const SpatialField c2(g.spatial_size(), 0.5);
  const CheckReport tri_eq = check_triangle(z, c1, c2, xcfg.eps, g, cfg, xcfg);
  const CheckReport cat_eq = check_cat0(z, c1, c2, {0.5}, xcfg.eps, g, cfg, xcfg);
  const bool equality_ok = std::abs(tri_eq.worst_violation) <= tri_eq.slack_used &&
                           std::abs(cat_eq.worst_violation) <= cat_eq.slack_used;

  out.passed = fails.empty() && worst_tri <= 0.0 && worst_cat <= 0.0 && equality_ok;
  out.detail = "worst (violation - slack): triangle " + fmt(worst_tri) + ", cat0 " +
               fmt(worst_cat) + "; collinear equality gaps " + fmt(tri_eq.worst_violation) +
               " / " + fmt(cat_eq.worst_violation) + (fails.empty() ? "" : ("; failed: " + fails));
  return out;
}

// --------------------------------------------------------------- criterion 10
Outcome criterion10() {
  Outcome out;
  const TorusGrid g = make_grid(1, 32, 33);
  const SolverConfig cfg;
  ExperimentConfig xcfg;
  xcfg.eps = std::pow(2.0, -6);

  TrigFieldGen gen(1010);
  double worst = -1e300;
  for (int f = 0; f < 3; ++f) {
    const SpatialField phi0 = f == 0 ? SpatialField(g.spatial_size()) : gen.random_admissible(g);
    const SpatialField psi = gen.random_admissible(g);
    std::vector<SpatialField> targets;
    for (int k = 0; k < 9; ++k) {
      const double s = k / 8.0;
      SpatialField t(g.spatial_size());
      for (int i = 0; i < g.spatial_size(); ++i) t[i] = phi0[i] + s * psi[i];
      targets.push_back(std::move(t));
    }
    const GeodesicFamily fam = make_family(phi0, targets, xcfg.eps, g, cfg);
    const CheckReport rep = check_jacobi(fam, g, xcfg);
    worst = std::max(worst, rep.worst_violation - rep.slack_used);
    out.passed = out.passed && rep.passed;
  }
  out.detail = "3 families of 9 samples, worst (violation - slack) = " + fmt(worst);
  return out;
}

// --------------------------------------------------------------- criterion 11
Outcome criterion11() {
  Outcome out;
  const TorusGrid g = make_grid(1, 32, 33);
  const SolverConfig cfg;
  TrigFieldGen gen(1111);
  const BoundaryPair b{gen.random_admissible(g), gen.random_admissible(g)};
  std::vector<double> schedule;
  for (double e = 1.0; e >= std::pow(2.0, -8) - 1e-15; e *= 0.5) schedule.push_back(e);

  const CheckReport rep = convergence_study(b, schedule, g, cfg);
  out.passed = rep.passed;
  std::istringstream det(rep.details);
  std::string first_line;
  std::getline(det, first_line);
  out.detail = first_line + " (schedule 1 .. 2^-8)";
  return out;
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* what;
    std::function<Outcome()> run;
  };

  std::vector<SolvedInstance> solved;  // shared by criteria 2 and 3

  const std::vector<Row> rows = {
      {1, "exact flat solution for constant boundary data", criterion1},
      {2, "residual and ellipticity on 20 random boundaries",
       [&] {
         solved = solve_random_instances();
         return criterion2(solved);
       }},
      {3, "barrier sandwich with the computed constant", [&] { return criterion3(solved); }},
      {4, "comparison principle under small perturbations", criterion4},
      {5, "energy-element drift halving ratios", criterion5},
      {6, "curvature nonpositivity and the T^2 benchmark", criterion6},
      {7, "curvature formula cross-check order", criterion7},
      {8, "matrix and log concavity lemmas", criterion8},
      {9, "triangle and quadrilateral comparison inequalities", criterion9},
      {10, "Jacobi norm convexity and endpoint growth", criterion10},
      {11, "epsilon convergence and uniform weak-C2 monitors", criterion11},
  };

  int failures = 0;
  const auto suite0 = std::chrono::steady_clock::now();
  for (const Row& row : rows) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome oc;
    try {
      oc = row.run();
    } catch (const std::exception& e) {
      oc.passed = false;
      oc.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s (%.1f s)\n    %s\n", oc.passed ? "PASS" : "FAIL", row.id,
                row.what, secs, oc.detail.c_str());
    std::fflush(stdout);
    if (!oc.passed) ++failures;
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - suite0).count();
  std::printf("%d of %zu criteria passed in %.1f s\n", static_cast<int>(rows.size()) - failures,
              rows.size(), total);
  return failures == 0 ? 0 : 1;
}
