#include "volform/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "volform/operators.hpp"

namespace volform {

double metric_pairing(const SpatialField& phi, const SpatialField& u, const SpatialField& v,
                      const TorusGrid& g) {
  if (!(min_admissibility(phi, g) > 0.0))
    throw std::domain_error("metric_pairing: base point not admissible");
  const SpatialField lap = laplacian(phi, g);
  SpatialField integrand(g.spatial_size());
  for (int i = 0; i < integrand.size(); ++i) integrand[i] = u[i] * v[i] * (1.0 + lap[i]);
  return integrate_spatial(integrand, g);
}

TimeQuadRule time_quad_rule(const TorusGrid& g) {
  return ((g.nt - 1) % 2 == 0) ? TimeQuadRule::simpson : TimeQuadRule::trapezoid;
}

const char* to_string(TimeQuadRule r) {
  return r == TimeQuadRule::simpson ? "simpson" : "trapezoid";
}

namespace {

// phi_t on slice j: central in the interior, one-sided second order at the
// time endpoints. Matches time_derivatives.
void slice_time_derivative(const SpacetimeField& phi, const TorusGrid& g, int j,
                           std::vector<double>& out) {
  const int ns = g.spatial_size();
  const double i2dt = 1.0 / (2.0 * g.dt);
  const double* v = phi.v.data();
  out.resize(ns);
  if (j == 0) {
    for (int i = 0; i < ns; ++i)
      out[i] = (-3.0 * v[i] + 4.0 * v[ns + i] - v[2 * ns + i]) * i2dt;
  } else if (j == g.nt - 1) {
    const size_t e = static_cast<size_t>(g.nt - 1) * ns;
    for (int i = 0; i < ns; ++i)
      out[i] = (3.0 * v[e + i] - 4.0 * v[e - ns + i] + v[e - 2 * static_cast<size_t>(ns) + i]) * i2dt;
  } else {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) out[i] = (v[o + ns + i] - v[o - ns + i]) * i2dt;
  }
}

double time_quadrature(const std::vector<double>& samples, const TorusGrid& g) {
  const int nt = g.nt;
  double acc = 0.0;
  if (time_quad_rule(g) == TimeQuadRule::simpson) {
    acc = samples[0] + samples[nt - 1];
    for (int j = 1; j < nt - 1; ++j) acc += samples[j] * ((j % 2 == 1) ? 4.0 : 2.0);
    return acc * g.dt / 3.0;
  }
  acc = 0.5 * (samples[0] + samples[nt - 1]);
  for (int j = 1; j < nt - 1; ++j) acc += samples[j];
  return acc * g.dt;
}

}  // namespace

double energy_element(const SpacetimeField& phi, int j, const TorusGrid& g) {
  if (j < 0 || j >= g.nt) throw std::out_of_range("energy_element: time index out of range");
  const int ns = g.spatial_size();
  std::vector<double> pt;
  slice_time_derivative(phi, g, j, pt);
  const SpatialField lap = laplacian(slice_copy(phi, g, j), g);
  SpatialField integrand(ns);
  for (int i = 0; i < ns; ++i) integrand[i] = pt[i] * pt[i] * (1.0 + lap[i]);
  return integrate_spatial(integrand, g);
}

double energy(const SpacetimeField& phi, const TorusGrid& g) {
  std::vector<double> e(g.nt);
  for (int j = 0; j < g.nt; ++j) e[j] = energy_element(phi, j, g);
  return 0.5 * time_quadrature(e, g);
}

double distance(const SpacetimeField& phi, const TorusGrid& g, ClampStats* stats) {
  const int ns = g.spatial_size();
  ClampStats local;
  std::vector<double> root(g.nt);
  double max_element = 0.0;
  std::vector<double> elements(g.nt);
  for (int j = 0; j < g.nt; ++j) {
    const SpatialField lap = laplacian(slice_copy(phi, g, j), g);
    for (int i = 0; i < ns; ++i)
      if (1.0 + lap[i] < 0.0) ++local.negative_nodes;
    elements[j] = energy_element(phi, j, g);
    max_element = std::max(max_element, elements[j]);
  }
  for (int j = 0; j < g.nt; ++j) {
    double e = elements[j];
    if (e < 0.0) {
      ++local.clamped_elements;
      local.max_clamp = std::max(local.max_clamp, -e);
      e = 0.0;
    }
    root[j] = std::sqrt(e);
  }
  if (local.max_clamp > 1e-8 * std::max(max_element, 1e-300))
    throw std::domain_error("distance: energy element negative beyond rounding scale");
  if (stats) *stats = local;
  return time_quadrature(root, g);
}

SpacetimeField covariant_derivative(const SpacetimeField& phi, const SpacetimeField& psi,
                                    const TorusGrid& g, double guard) {
  const int ns = g.spatial_size();
  const double i2h = 1.0 / (2.0 * g.h);

  SpacetimeField out(g.total_size());
  std::vector<double> phit, psit;
  for (int j = 0; j < g.nt; ++j) {
    slice_time_derivative(phi, g, j, phit);
    slice_time_derivative(psi, g, j, psit);
    const SpatialField lap = laplacian(slice_copy(phi, g, j), g);
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) {
      const double vol = 1.0 + lap[i];
      if (vol < guard)
        throw std::domain_error("covariant_derivative: path leaves the admissible cone");
      double acc = psit[i];
      for (int a = 0; a < g.dim; ++a) {
        const int ip = g.neighbor(i, a, +1);
        const int im = g.neighbor(i, a, -1);
        const double w = -(phit[ip] - phit[im]) * i2h / vol;
        acc += w * (psi[o + ip] - psi[o + im]) * i2h;
      }
      out[o + i] = acc;
    }
  }
  return out;
}

double sectional_curvature(const SpatialField& phi, const SpatialField& alpha,
                           const SpatialField& beta, const TorusGrid& g) {
  const SpatialField lap = laplacian(phi, g);
  for (int i = 0; i < lap.size(); ++i)
    if (!(1.0 + lap[i] > 0.0))
      throw std::domain_error("sectional_curvature: base point not admissible");
  if (g.dim == 1) return 0.0;  // a 2-form on a 1-manifold vanishes

  std::vector<SpatialField> da(g.dim), db(g.dim);
  for (int a = 0; a < g.dim; ++a) {
    da[a] = gradient_axis(alpha, g, a);
    db[a] = gradient_axis(beta, g, a);
  }
  SpatialField integrand(g.spatial_size());
  for (int i = 0; i < integrand.size(); ++i) {
    double w2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      for (int b = a + 1; b < g.dim; ++b) {
        const double w = da[a][i] * db[b][i] - da[b][i] * db[a][i];
        w2 += w * w;
      }
    }
    integrand[i] = w2 / (1.0 + lap[i]);
  }
  return -integrate_spatial(integrand, g);
}

SpatialField curvature_apply_2d(const SpatialField& phi, const SpatialField& alpha,
                                const SpatialField& beta, const SpatialField& psi,
                                const TorusGrid& g) {
  if (g.dim != 2)
    throw std::invalid_argument("curvature_apply_2d: planar curl needs d = 2");
  const SpatialField lap = laplacian(phi, g);
  for (int i = 0; i < lap.size(); ++i)
    if (!(1.0 + lap[i] > 0.0))
      throw std::domain_error("curvature_apply_2d: base point not admissible");

  const SpatialField a0 = gradient_axis(alpha, g, 0);
  const SpatialField a1 = gradient_axis(alpha, g, 1);
  const SpatialField b0 = gradient_axis(beta, g, 0);
  const SpatialField b1 = gradient_axis(beta, g, 1);

  SpatialField q(g.spatial_size());
  for (int i = 0; i < q.size(); ++i)
    q[i] = (a0[i] * b1[i] - a1[i] * b0[i]) / (1.0 + lap[i]);

  // curl(q) = (dq/dx2, -dq/dx1)
  const SpatialField q0 = gradient_axis(q, g, 0);
  const SpatialField q1 = gradient_axis(q, g, 1);
  const SpatialField p0 = gradient_axis(psi, g, 0);
  const SpatialField p1 = gradient_axis(psi, g, 1);

  SpatialField out(g.spatial_size());
  for (int i = 0; i < out.size(); ++i) {
    const double nu0 = q1[i] / (1.0 + lap[i]);
    const double nu1 = -q0[i] / (1.0 + lap[i]);
    out[i] = nu0 * p0[i] + nu1 * p1[i];
  }
  return out;
}

double curvature_operator_2d(const SpatialField& phi, const SpatialField& alpha,
                             const SpatialField& beta, const TorusGrid& g) {
  const SpatialField r = curvature_apply_2d(phi, alpha, beta, alpha, g);
  return metric_pairing(phi, r, beta, g);
}

SpacetimeField family_s_derivative(const GeodesicFamily& fam, int si, const TorusGrid& g) {
  const int m = fam.samples();
  if (m < 3)
    throw std::invalid_argument("family_s_derivative: need at least 3 s samples");
  if (si < 0 || si >= m) throw std::out_of_range("family_s_derivative: sample out of range");
  const double i2ds = 1.0 / (2.0 * fam.ds);
  SpacetimeField out(g.total_size());
  if (si == 0) {
    const auto& f0 = fam.phis[0].v;
    const auto& f1 = fam.phis[1].v;
    const auto& f2 = fam.phis[2].v;
    for (int i = 0; i < out.size(); ++i) out[i] = (-3.0 * f0[i] + 4.0 * f1[i] - f2[i]) * i2ds;
  } else if (si == m - 1) {
    const auto& f0 = fam.phis[m - 1].v;
    const auto& f1 = fam.phis[m - 2].v;
    const auto& f2 = fam.phis[m - 3].v;
    for (int i = 0; i < out.size(); ++i) out[i] = (3.0 * f0[i] - 4.0 * f1[i] + f2[i]) * i2ds;
  } else {
    const auto& fp = fam.phis[si + 1].v;
    const auto& fm = fam.phis[si - 1].v;
    for (int i = 0; i < out.size(); ++i) out[i] = (fp[i] - fm[i]) * i2ds;
  }
  return out;
}

double jacobi_norm(const GeodesicFamily& fam, int si, int tj, const TorusGrid& g) {
  if (tj < 0 || tj >= g.nt) throw std::out_of_range("jacobi_norm: time index out of range");
  const SpacetimeField ys = family_s_derivative(fam, si, g);
  const SpatialField y = slice_copy(ys, g, tj);
  const SpatialField base = slice_copy(fam.phis[si], g, tj);
  const double n2 = metric_pairing(base, y, y, g);
  return std::sqrt(std::max(0.0, n2));
}

}  // namespace volform
