#include "volform/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace volform {

SpatialField laplacian(const SpatialField& f, const TorusGrid& g) {
  SpatialField out(g.spatial_size());
  const double ih2 = 1.0 / (g.h * g.h);
  for (int i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      acc += f[g.neighbor(i, a, +1)] - 2.0 * f[i] + f[g.neighbor(i, a, -1)];
    }
    out[i] = acc * ih2;
  }
  return out;
}

SpatialField gradient_axis(const SpatialField& f, const TorusGrid& g, int axis) {
  SpatialField out(g.spatial_size());
  const double i2h = 1.0 / (2.0 * g.h);
  for (int i = 0; i < out.size(); ++i) {
    out[i] = (f[g.neighbor(i, axis, +1)] - f[g.neighbor(i, axis, -1)]) * i2h;
  }
  return out;
}

double min_admissibility(const SpatialField& phi, const TorusGrid& g) {
  const SpatialField lap = laplacian(phi, g);
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < lap.size(); ++i) m = std::min(m, 1.0 + lap[i]);
  return m;
}

void validate_boundary(const BoundaryPair& b, const TorusGrid& g, double margin) {
  if (b.phi0.size() != g.spatial_size() || b.phi1.size() != g.spatial_size())
    throw std::invalid_argument("boundary: field size does not match grid");
  const double m0 = min_admissibility(b.phi0, g);
  const double m1 = min_admissibility(b.phi1, g);
  if (!(m0 > margin) || !(m1 > margin))
    throw std::invalid_argument("boundary: endpoint not admissible, min(1+lap phi) = " +
                                std::to_string(std::min(m0, m1)));
}

namespace {

// Laplacian of one time slice, result written at the slice offset.
void slice_laplacian(const SpacetimeField& f, const TorusGrid& g, int j, SpacetimeField& out) {
  const int ns = g.spatial_size();
  const double ih2 = 1.0 / (g.h * g.h);
  const double* src = f.v.data() + static_cast<size_t>(j) * ns;
  double* dst = out.v.data() + static_cast<size_t>(j) * ns;
  for (int i = 0; i < ns; ++i) {
    double acc = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      acc += src[g.neighbor(i, a, +1)] - 2.0 * src[i] + src[g.neighbor(i, a, -1)];
    }
    dst[i] = acc * ih2;
  }
}

}  // namespace

TimeDerivatives time_derivatives(const SpacetimeField& phi, const TorusGrid& g) {
  const int ns = g.spatial_size();
  const int nt = g.nt;
  TimeDerivatives d;
  d.t = SpacetimeField(g.total_size());
  d.tt = SpacetimeField(g.total_size());
  d.tk.assign(g.dim, SpacetimeField(g.total_size()));

  const double i2dt = 1.0 / (2.0 * g.dt);
  const double idt2 = 1.0 / (g.dt * g.dt);
  const double i2h = 1.0 / (2.0 * g.h);

  const double* v = phi.v.data();
  for (int i = 0; i < ns; ++i) {
    // one-sided second order at both time endpoints
    d.t[i] = (-3.0 * v[i] + 4.0 * v[ns + i] - v[2 * ns + i]) * i2dt;
    const size_t e = static_cast<size_t>(nt - 1) * ns + i;
    d.t[e] = (3.0 * v[e] - 4.0 * v[e - ns] + v[e - 2 * static_cast<size_t>(ns)]) * i2dt;
  }
  for (int j = 1; j < nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) {
      d.t[o + i] = (v[o + ns + i] - v[o - ns + i]) * i2dt;
      d.tt[o + i] = (v[o + ns + i] - 2.0 * v[o + i] + v[o - ns + i]) * idt2;
    }
    for (int a = 0; a < g.dim; ++a) {
      SpacetimeField& tk = d.tk[a];
      for (int i = 0; i < ns; ++i) {
        const int ip = g.neighbor(i, a, +1);
        const int im = g.neighbor(i, a, -1);
        const double gp = (v[o + ns + ip] - v[o + ns + im]) * i2h;
        const double gm = (v[o - ns + ip] - v[o - ns + im]) * i2h;
        tk[o + i] = (gp - gm) * i2dt;
      }
    }
  }
  return d;
}

namespace {

// Shared interior-node kernel: evaluates tt, lap and the mixed tk at one node.
struct NodeDerivs {
  double tt;
  double lap;
  double tk[3];
};

inline NodeDerivs node_derivs(const double* v, const TorusGrid& g, int ns, size_t o, int i) {
  NodeDerivs nd{};
  const double idt2 = 1.0 / (g.dt * g.dt);
  const double ih2 = 1.0 / (g.h * g.h);
  const double i4dth = 1.0 / (4.0 * g.dt * g.h);
  nd.tt = (v[o + ns + i] - 2.0 * v[o + i] + v[o - ns + i]) * idt2;
  double lap = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const int ip = g.neighbor(i, a, +1);
    const int im = g.neighbor(i, a, -1);
    lap += v[o + ip] - 2.0 * v[o + i] + v[o + im];
    nd.tk[a] = (v[o + ns + ip] - v[o + ns + im] - v[o - ns + ip] + v[o - ns + im]) * i4dth;
  }
  nd.lap = lap * ih2;
  return nd;
}

}  // namespace

SpacetimeField q_op(const SpacetimeField& phi, const TorusGrid& g) {
  const int ns = g.spatial_size();
  SpacetimeField out(g.total_size());
  const double* v = phi.v.data();
  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) {
      const NodeDerivs nd = node_derivs(v, g, ns, o, i);
      double q = nd.tt * (1.0 + nd.lap);
      for (int a = 0; a < g.dim; ++a) q -= nd.tk[a] * nd.tk[a];
      out[o + i] = q;
    }
  }
  return out;
}

SpacetimeField p_op(double s, const SpacetimeField& phi, const TorusGrid& g) {
  const int ns = g.spatial_size();
  SpacetimeField out(g.total_size());
  const double* v = phi.v.data();
  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) {
      const NodeDerivs nd = node_derivs(v, g, ns, o, i);
      double q = nd.tt * (1.0 + nd.lap);
      for (int a = 0; a < g.dim; ++a) q -= nd.tk[a] * nd.tk[a];
      out[o + i] = s * q + (1.0 - s) * (nd.tt + nd.lap);
    }
  }
  return out;
}

OperatorCoefficients operator_coefficients(double s, const SpacetimeField& phi,
                                           const TorusGrid& g) {
  const int ns = g.spatial_size();
  OperatorCoefficients co;
  co.a = SpacetimeField(g.total_size());
  co.b = SpacetimeField(g.total_size());
  co.c.assign(g.dim, SpacetimeField(g.total_size()));
  const double* v = phi.v.data();
  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) {
      const NodeDerivs nd = node_derivs(v, g, ns, o, i);
      co.a[o + i] = s * nd.tt + (1.0 - s);
      co.b[o + i] = s * (1.0 + nd.lap) + (1.0 - s);
      for (int a = 0; a < g.dim; ++a) co.c[a][o + i] = s * nd.tk[a];
    }
  }
  return co;
}

SpacetimeField dp_apply(const OperatorCoefficients& co, const SpacetimeField& h,
                        const TorusGrid& g) {
  const int ns = g.spatial_size();
  SpacetimeField out(g.total_size());
  const double* v = h.v.data();
  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) {
      const NodeDerivs nd = node_derivs(v, g, ns, o, i);
      double acc = co.a[o + i] * nd.lap + co.b[o + i] * nd.tt;
      for (int a = 0; a < g.dim; ++a) acc -= 2.0 * co.c[a][o + i] * nd.tk[a];
      out[o + i] = acc;
    }
  }
  return out;
}

SpacetimeField dp_apply(double s, const SpacetimeField& phi, const SpacetimeField& h,
                        const TorusGrid& g) {
  return dp_apply(operator_coefficients(s, phi, g), h, g);
}

EllipticityMargins ellipticity_margins(double s, const SpacetimeField& phi,
                                       const TorusGrid& g) {
  const int ns = g.spatial_size();
  EllipticityMargins m;
  m.min_a = m.min_b = m.min_f = std::numeric_limits<double>::infinity();
  const double* v = phi.v.data();
  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) {
      const NodeDerivs nd = node_derivs(v, g, ns, o, i);
      m.min_a = std::min(m.min_a, s * nd.tt + (1.0 - s));
      m.min_b = std::min(m.min_b, s * (1.0 + nd.lap) + (1.0 - s));
      m.min_f = std::min(m.min_f, nd.tt + 1.0 + nd.lap);
    }
  }
  return m;
}

double interior_sup(const SpacetimeField& f, const TorusGrid& g) {
  const int ns = g.spatial_size();
  double m = 0.0;
  for (int j = 1; j < g.nt - 1; ++j) {
    const size_t o = static_cast<size_t>(j) * ns;
    for (int i = 0; i < ns; ++i) m = std::max(m, std::abs(f[o + i]));
  }
  return m;
}

double matrix_q(const SymMatrix& A) {
  double trace = 0.0;
  double cross = 0.0;
  for (int i = 1; i <= A.n; ++i) {
    trace += A.at(i, i);
    cross += A.at(i, 0) * A.at(i, 0);
  }
  return A.at(0, 0) * trace - cross;
}

double log_q(double x, double y, std::span<const double> z) {
  double z2 = 0.0;
  for (double zi : z) z2 += zi * zi;
  const double det = x * y - z2;
  if (!(x > 0.0) || !(y > 0.0) || !(det > 0.0))
    throw std::domain_error("log_q: requires x>0, y>0 and x*y - sum z^2 > 0");
  return std::log(det);
}

}  // namespace volform
