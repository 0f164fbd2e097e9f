#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace volform {

inline constexpr double kPi = 3.14159265358979323846;

// Uniform lattice on X x [0,1] with X the unit flat torus T^d, d in {1,2,3}.
// Spatial nodes x_i = i*h with h = 1/n, periodic per axis; time nodes
// t_j = j*dt with dt = 1/(nt-1), both endpoints included. Vol(X) = 1.
struct TorusGrid {
  int dim = 1;
  int n = 4;
  int nt = 3;
  double h = 0.25;
  double dt = 0.5;

  int spatial_size() const {
    int s = n;
    for (int k = 1; k < dim; ++k) s *= n;
    return s;
  }
  int total_size() const { return nt * spatial_size(); }
  double time(int j) const { return dt * static_cast<double>(j); }
  double coord(int i) const { return h * static_cast<double>(i); }

  int stride(int axis) const {
    int s = 1;
    for (int k = 0; k < axis; ++k) s *= n;
    return s;
  }

  // Flat spatial index; axis 0 varies fastest.
  int index(const std::array<int, 3>& x) const {
    int idx = 0;
    for (int a = dim - 1; a >= 0; --a) idx = idx * n + x[a];
    return idx;
  }
  std::array<int, 3> coords_of(int idx) const {
    std::array<int, 3> x{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      x[a] = idx % n;
      idx /= n;
    }
    return x;
  }

  // Flat index of the periodic neighbor idx +- |step| along axis.
  int neighbor(int idx, int axis, int step) const {
    const int s = stride(axis);
    const int c = (idx / s) % n;
    int cw = (c + step) % n;
    if (cw < 0) cw += n;
    return idx + (cw - c) * s;
  }
};

// Throws std::invalid_argument unless d in {1,2,3}, n >= 4, nt >= 3.
TorusGrid make_grid(int dim, int n, int nt);

// Scalar function on the spatial lattice, indexed per TorusGrid::index.
struct SpatialField {
  std::vector<double> v;

  SpatialField() = default;
  explicit SpatialField(int size, double fill = 0.0) : v(size, fill) {}

  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  int size() const { return static_cast<int>(v.size()); }
};

// Scalar function on the time x space lattice, time-major: the value at
// (time j, spatial i) sits at v[j*ns + i], so a time slice is contiguous.
struct SpacetimeField {
  std::vector<double> v;

  SpacetimeField() = default;
  explicit SpacetimeField(int size, double fill = 0.0) : v(size, fill) {}

  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  int size() const { return static_cast<int>(v.size()); }
};

inline std::span<double> time_slice(SpacetimeField& f, const TorusGrid& g, int j) {
  const int ns = g.spatial_size();
  return {f.v.data() + static_cast<size_t>(j) * ns, static_cast<size_t>(ns)};
}
inline std::span<const double> time_slice(const SpacetimeField& f, const TorusGrid& g, int j) {
  const int ns = g.spatial_size();
  return {f.v.data() + static_cast<size_t>(j) * ns, static_cast<size_t>(ns)};
}

SpatialField slice_copy(const SpacetimeField& f, const TorusGrid& g, int j);
void set_time_slice(SpacetimeField& f, const TorusGrid& g, int j, const SpatialField& s);

// Admissible endpoint data: each side must satisfy 1 + lap(phi) > 0 nodally
// (checked by the solver, which owns the Laplacian).
struct BoundaryPair {
  SpatialField phi0;
  SpatialField phi1;
};

// Periodic rectangle rule, h^d * sum over nodes in flat-index order.
// Exact for trigonometric polynomials below the Nyquist limit.
double integrate_spatial(const SpatialField& f, const TorusGrid& g);

// f minus its spatial mean; the result integrates to 0 up to one rounding.
SpatialField normalize(const SpatialField& f, const TorusGrid& g);

// One Fourier mode a*cos(2*pi*k.x + phase); k has g.dim used entries.
struct TrigMode {
  std::array<int, 3> k{0, 0, 0};
  double amplitude = 0.0;
  double phase = 0.0;
};

SpatialField make_trig_field(const TorusGrid& g, std::span<const TrigMode> modes);

// Upper bound sum_m |a_m| * (2*pi*|k_m|_2)^2 on sup|lap(phi)|; the discrete
// Laplacian never exceeds the continuum eigenvalue, so this bound is safe.
double laplacian_sup_bound(std::span<const TrigMode> modes);

double sup_norm(std::span<const double> v);
double sup_diff(std::span<const double> a, std::span<const double> b);

}  // namespace volform
