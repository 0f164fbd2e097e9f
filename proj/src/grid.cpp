#include "volform/grid.hpp"

#include <algorithm>
#include <cmath>

namespace volform {

TorusGrid make_grid(int dim, int n, int nt) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("grid: dim must be 1, 2 or 3, got " + std::to_string(dim));
  if (n < 4)
    throw std::invalid_argument("grid: n must be >= 4, got " + std::to_string(n));
  if (nt < 3)
    throw std::invalid_argument("grid: nt must be >= 3, got " + std::to_string(nt));
  TorusGrid g;
  g.dim = dim;
  g.n = n;
  g.nt = nt;
  g.h = 1.0 / static_cast<double>(n);
  g.dt = 1.0 / static_cast<double>(nt - 1);
  return g;
}

SpatialField slice_copy(const SpacetimeField& f, const TorusGrid& g, int j) {
  const auto s = time_slice(f, g, j);
  SpatialField out(g.spatial_size());
  std::copy(s.begin(), s.end(), out.v.begin());
  return out;
}

void set_time_slice(SpacetimeField& f, const TorusGrid& g, int j, const SpatialField& s) {
  auto dst = time_slice(f, g, j);
  std::copy(s.v.begin(), s.v.end(), dst.begin());
}

double integrate_spatial(const SpatialField& f, const TorusGrid& g) {
  // Fixed lexicographic summation order for reproducibility.
  double acc = 0.0;
  for (double x : f.v) acc += x;
  double cell = g.h;
  for (int k = 1; k < g.dim; ++k) cell *= g.h;
  return cell * acc;
}

SpatialField normalize(const SpatialField& f, const TorusGrid& g) {
  const double mean = integrate_spatial(f, g);  // Vol(X) = 1
  SpatialField out = f;
  for (double& x : out.v) x -= mean;
  return out;
}

SpatialField make_trig_field(const TorusGrid& g, std::span<const TrigMode> modes) {
  SpatialField out(g.spatial_size());
  for (int i = 0; i < out.size(); ++i) {
    const auto x = g.coords_of(i);
    double val = 0.0;
    for (const TrigMode& m : modes) {
      double arg = m.phase;
      for (int a = 0; a < g.dim; ++a) arg += 2.0 * kPi * m.k[a] * g.coord(x[a]);
      val += m.amplitude * std::cos(arg);
    }
    out[i] = val;
  }
  return out;
}

double laplacian_sup_bound(std::span<const TrigMode> modes) {
  double bound = 0.0;
  for (const TrigMode& m : modes) {
    double k2 = 0.0;
    for (int a = 0; a < 3; ++a) k2 += static_cast<double>(m.k[a]) * m.k[a];
    bound += std::abs(m.amplitude) * 4.0 * kPi * kPi * k2;
  }
  return bound;
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace volform
