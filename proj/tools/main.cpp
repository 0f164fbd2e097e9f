#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "volform/experiments.hpp"
#include "volform/field_io.hpp"
#include "volform/geometry.hpp"
#include "volform/grid.hpp"
#include "volform/operators.hpp"
#include "volform/run_config.hpp"
#include "volform/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace volform;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json margins_json(const EllipticityMargins& m) {
  return json{{"min_a", m.min_a}, {"min_b", m.min_b}, {"min_f", m.min_f}};
}

json report_json(const SolveReport& rep, const TorusGrid& g) {
  json j{
      {"grid", {{"dim", g.dim}, {"n", g.n}, {"nt", g.nt}}},
      {"epsilon", rep.epsilon},
      {"converged", rep.converged},
      {"residual_sup", rep.residual_sup},
      {"margins", margins_json(rep.margins)},
      {"s_trace", rep.s_trace},
      {"newton_iters", rep.newton_iters},
      {"s_reached", rep.s_reached},
      {"margin_warning", rep.margin_warning},
      {"note", rep.note},
      {"time_quadrature", to_string(time_quad_rule(g))},
  };
  if (!std::isnan(rep.dist_from_prev)) j["dist_from_prev"] = rep.dist_from_prev;
  return j;
}

json check_json(const CheckReport& c) {
  return json{{"name", c.name},
              {"passed", c.passed},
              {"worst_violation", c.worst_violation},
              {"slack_used", c.slack_used},
              {"samples", c.samples},
              {"seed", c.seed},
              {"details", c.details}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
}

void echo_config(const fs::path& dir, const RunConfig& cfg) {
  if (!cfg.source_text.empty()) write_text(dir / "config.echo", cfg.source_text);
}

void write_energy_csv(const fs::path& path, const SpacetimeField& phi, const TorusGrid& g) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("cannot open " + path.string());
  std::fprintf(out, "t,E\n");
  for (int j = 0; j < g.nt; ++j)
    std::fprintf(out, "%.17g,%.17g\n", g.time(j), energy_element(phi, j, g));
  std::fclose(out);
}

int cmd_solve(const RunConfig& cfg, const std::string& out_dir) {
  const TorusGrid g = cfg.grid();
  const BoundaryPair b = cfg.boundary(g);
  fs::create_directories(out_dir);
  echo_config(out_dir, cfg);

  const SolveReport rep = continuation_in_s(b, cfg.solver.epsilon, g, cfg.solver);

  json j = report_json(rep, g);
  write_spacetime_field((fs::path(out_dir) / "phi.f64").string(), rep.phi, g);
  write_energy_csv(fs::path(out_dir) / "energy.csv", rep.phi, g);

  std::ostringstream summary;
  summary << (rep.converged ? "converged" : "FAILED") << " at eps = " << fmt(rep.epsilon)
          << ", residual sup = " << fmt(rep.residual_sup) << "\n"
          << "margins: a = " << fmt(rep.margins.min_a) << ", b = " << fmt(rep.margins.min_b)
          << ", f = " << fmt(rep.margins.min_f) << "\n";
  if (rep.converged) {
    ClampStats clamp;
    const double dist = distance(rep.phi, g, &clamp);
    const double en = energy(rep.phi, g);
    j["distance"] = dist;
    j["energy"] = en;
    j["distance_clamp"] = {{"negative_nodes", clamp.negative_nodes},
                           {"clamped_elements", clamp.clamped_elements},
                           {"max_clamp", clamp.max_clamp}};
    summary << "distance = " << fmt(dist) << ", energy = " << fmt(en) << "\n";
  } else {
    summary << "note: " << rep.note << "\n";
  }
  write_text(fs::path(out_dir) / "report.json", j.dump(2) + "\n");
  write_text(fs::path(out_dir) / "summary.txt", summary.str());
  std::cout << summary.str();
  return rep.converged ? kExitOk : kExitNumerical;
}

// Per-suite default instance counts when --samples is not given.
long suite_default_samples(const std::string& suite) {
  if (suite == "concavity") return 100000;
  if (suite == "comparison") return 5;
  if (suite == "triangle") return 3;
  if (suite == "cat0") return 2;
  if (suite == "jacobi") return 1;
  if (suite == "energy") return 2;
  if (suite == "lowerbound") return 3;
  if (suite == "barriers") return 3;
  return 1;
}

std::vector<CheckReport> run_suite(const std::string& suite, const RunConfig& cfg,
                                   bool samples_overridden) {
  const TorusGrid g = cfg.grid();
  const SolverConfig& scfg = cfg.solver;
  ExperimentConfig xcfg = cfg.experiment;
  if (!samples_overridden) xcfg.samples = suite_default_samples(suite);

  TrigFieldGen gen(xcfg.seed);
  std::vector<CheckReport> out;

  auto tag = [&](CheckReport r, long index) {
    r.name += "[" + std::to_string(index) + "]";
    out.push_back(std::move(r));
  };

  if (suite == "concavity") {
    out.push_back(check_concavity(xcfg.samples, xcfg.seed));
  } else if (suite == "comparison") {
    for (long i = 0; i < xcfg.samples; ++i) {
      const BoundaryPair b1{gen.random_admissible(g), gen.random_admissible(g)};
      SpatialField d0 = gen.random_tangent(g, 1.0);
      SpatialField d1 = gen.random_tangent(g, 1.0);
      const double s0 = 0.01 / std::max(sup_norm(d0.v), 1e-300);
      const double s1 = 0.01 / std::max(sup_norm(d1.v), 1e-300);
      BoundaryPair b2 = b1;
      for (int k = 0; k < g.spatial_size(); ++k) {
        b2.phi0[k] += s0 * d0[k];
        b2.phi1[k] += s1 * d1[k];
      }
      tag(check_comparison(b1, b2, scfg.epsilon, g, scfg, xcfg), i);
    }
  } else if (suite == "barriers") {
    for (long i = 0; i < xcfg.samples; ++i) {
      const BoundaryPair b{gen.random_admissible(g), gen.random_admissible(g)};
      const SolveReport rep = continuation_in_s(b, scfg.epsilon, g, scfg);
      if (!rep.converged) throw std::runtime_error("barriers: solve failed");
      const double a = barrier_constant(b, scfg.epsilon, 1.0, g);
      tag(check_barriers(rep, b, a, g), i);
    }
  } else if (suite == "triangle") {
    for (long i = 0; i < xcfg.samples; ++i) {
      tag(check_triangle(gen.random_admissible(g), gen.random_admissible(g),
                         gen.random_admissible(g), xcfg.eps, g, scfg, xcfg),
          i);
    }
  } else if (suite == "cat0") {
    for (long i = 0; i < xcfg.samples; ++i) {
      tag(check_cat0(gen.random_admissible(g), gen.random_admissible(g),
                     gen.random_admissible(g), xcfg.lambdas, xcfg.eps, g, scfg, xcfg),
          i);
    }
  } else if (suite == "jacobi") {
    for (long i = 0; i < xcfg.samples; ++i) {
      const SpatialField phi0 = gen.random_admissible(g);
      const SpatialField psi = gen.random_admissible(g);
      const int ns_samples = 9;
      std::vector<SpatialField> targets;
      for (int k = 0; k < ns_samples; ++k) {
        const double s = static_cast<double>(k) / (ns_samples - 1);
        SpatialField t(g.spatial_size());
        for (int m = 0; m < g.spatial_size(); ++m) t[m] = phi0[m] + s * psi[m];
        targets.push_back(std::move(t));
      }
      const GeodesicFamily fam = make_family(phi0, targets, xcfg.eps, g, scfg);
      tag(check_jacobi(fam, g, xcfg), i);
    }
  } else if (suite == "energy") {
    for (long i = 0; i < xcfg.samples; ++i) {
      const BoundaryPair b{gen.random_admissible(g), gen.random_admissible(g)};
      const SolveReport rep = continuation_in_s(b, scfg.epsilon, g, scfg);
      if (!rep.converged) throw std::runtime_error("energy: solve failed");
      tag(check_energy_constancy(rep, b, g, scfg), i);
    }
  } else if (suite == "lowerbound") {
    for (long i = 0; i < xcfg.samples; ++i) {
      const SpatialField phi = normalize(gen.random_admissible(g), g);
      tag(check_lower_bound(phi, xcfg.eps, g, scfg, xcfg), i);
    }
  } else if (suite == "converge") {
    const BoundaryPair b{gen.random_admissible(g), gen.random_admissible(g)};
    std::vector<double> schedule = scfg.eps_schedule;
    if (schedule.empty())
      for (double e = 1.0; e >= 0.5 * std::pow(2.0, -8); e *= 0.5) schedule.push_back(e);
    out.push_back(convergence_study(b, schedule, g, scfg));
  } else {
    throw ConfigError("unknown suite '" + suite + "'");
  }
  return out;
}

const std::vector<std::string> kAllSuites = {"concavity", "comparison", "barriers",
                                             "triangle",  "cat0",       "jacobi",
                                             "energy",    "lowerbound", "converge"};

int cmd_check(const RunConfig& cfg, const std::string& suite, const std::string& out_dir,
              bool samples_overridden) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = kAllSuites;
  } else {
    bool known = false;
    for (const auto& s : kAllSuites) known = known || s == suite;
    if (!known) throw ConfigError("unknown suite '" + suite + "'");
    suites = {suite};
  }

  fs::create_directories(out_dir);
  echo_config(out_dir, cfg);

  json all = json::array();
  std::ostringstream summary;
  bool ok = true;
  for (const std::string& s : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto reports = run_suite(s, cfg, samples_overridden);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const CheckReport& r : reports) {
      all.push_back(check_json(r));
      ok = ok && r.passed;
      summary << (r.passed ? "PASS" : "FAIL") << "  " << r.name
              << "  worst = " << fmt(r.worst_violation) << "  slack = " << fmt(r.slack_used)
              << "\n";
    }
    summary << "# suite " << s << " finished in " << fmt(secs) << " s\n";
  }

  write_text(fs::path(out_dir) / "check.json", all.dump(2) + "\n");
  write_text(fs::path(out_dir) / "summary.txt", summary.str());
  std::cout << summary.str();
  return ok ? kExitOk : kExitNumerical;
}

int cmd_distance(const RunConfig& cfg, const std::string& a_spec, const std::string& b_spec,
                 double eps, int extrapolate) {
  const TorusGrid g = cfg.grid();
  SpatialField pa, pb;
  if (!a_spec.empty())
    pa = cfg.materialize(parse_point_spec(a_spec, g.dim), g);
  else if (!cfg.phi0.empty())
    pa = cfg.materialize(cfg.phi0, g);
  else
    throw ConfigError("distance: endpoint A missing (use --a or [boundary] phi0)");
  if (!b_spec.empty())
    pb = cfg.materialize(parse_point_spec(b_spec, g.dim), g);
  else if (!cfg.phi1.empty())
    pb = cfg.materialize(cfg.phi1, g);
  else
    throw ConfigError("distance: endpoint B missing (use --b or [boundary] phi1)");

  validate_boundary(BoundaryPair{pa, pb}, g);

  const double d = geodesic_distance(pa, pb, eps, g, cfg.solver);
  std::cout << "d_eps = " << fmt(d) << "  (eps = " << fmt(eps) << ")\n";
  if (extrapolate > 0) {
    std::cout << "eps, d_eps\n";
    double e = eps;
    for (int k = 0; k < extrapolate; ++k) {
      std::cout << fmt(e) << ", " << fmt(geodesic_distance(pa, pb, e, g, cfg.solver)) << "\n";
      e *= 0.5;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesics, curvature and metric geometry of the space of volume forms on T^d"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite = "all", a_spec, b_spec, lambdas_csv;
  double eps_override = -1.0;
  long seed_override = -1, samples_override = -1;
  int extrapolate = 0;

  CLI::App* solve = app.add_subcommand("solve", "solve the perturbed geodesic problem");
  solve->add_option("--config", config_path, "config file")->required();
  solve->add_option("--out", out_dir, "output directory")->default_val("run_solve");
  solve->add_option("--eps", eps_override, "override epsilon");

  CLI::App* check = app.add_subcommand("check", "run verification suites");
  check->add_option("suite", suite, "suite name or 'all'");
  check->add_option("--suite", suite, "suite name or 'all'");
  check->add_option("--config", config_path, "config file");
  check->add_option("--out", out_dir, "output directory")->default_val("run_check");
  check->add_option("--seed", seed_override, "random seed");
  check->add_option("--samples", samples_override, "instances per suite");
  check->add_option("--lambdas", lambdas_csv, "comma list of lambda values");
  check->add_option("--eps", eps_override, "epsilon for geodesic checks");

  CLI::App* dist = app.add_subcommand("distance", "geodesic distance between two points");
  dist->add_option("--config", config_path, "config file");
  dist->add_option("--a", a_spec, "endpoint A: const:V, trig:..., file:PATH");
  dist->add_option("--b", b_spec, "endpoint B: const:V, trig:..., file:PATH");
  dist->add_option("--eps", eps_override, "epsilon (default from [experiment] eps)");
  dist->add_option("--extrapolate", extrapolate, "rows of an eps-halving table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = parse_config_file(config_path);
    if (seed_override >= 0) cfg.experiment.seed = static_cast<uint64_t>(seed_override);
    if (samples_override >= 0) cfg.experiment.samples = samples_override;
    if (!lambdas_csv.empty()) cfg.experiment.lambdas = parse_double_list(lambdas_csv);
    if (eps_override > 0.0) {
      cfg.solver.epsilon = eps_override;
      cfg.experiment.eps = eps_override;
    }

    if (solve->parsed()) return cmd_solve(cfg, out_dir);
    if (check->parsed()) {
      const bool suite_given = check->count("suite") > 0 || check->count("--suite") > 0;
      if (!suite_given) suite = cfg.suite;
      return cmd_check(cfg, suite, out_dir, samples_override >= 0);
    }
    if (dist->parsed()) {
      const double eps = eps_override > 0.0 ? eps_override : cfg.experiment.eps;
      return cmd_distance(cfg, a_spec, b_spec, eps, extrapolate);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
