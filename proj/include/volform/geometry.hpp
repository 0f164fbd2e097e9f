#pragma once

#include <string>
#include <vector>

#include "volform/grid.hpp"

namespace volform {

// <u, v>_phi = integral of u v (1 + lap phi); throws std::domain_error if
// phi is not admissible.
double metric_pairing(const SpatialField& phi, const SpatialField& u, const SpatialField& v,
                      const TorusGrid& g);

// Composite Simpson needs an even interval count; otherwise trapezoid.
enum class TimeQuadRule { simpson, trapezoid };
TimeQuadRule time_quad_rule(const TorusGrid& g);
const char* to_string(TimeQuadRule r);

// Energy element E(t_j) = integral of phi_t^2 (1 + lap phi) over the slice;
// phi_t is one-sided second order at the time endpoints.
double energy_element(const SpacetimeField& phi, int j, const TorusGrid& g);

// Path energy 1/2 * time quadrature of the energy element.
double energy(const SpacetimeField& phi, const TorusGrid& g);

struct ClampStats {
  long negative_nodes = 0;    // nodes with 1 + lap phi < 0
  long clamped_elements = 0;  // slice elements clamped at 0 before sqrt
  double max_clamp = 0.0;     // largest clamped magnitude
};

// Geodesic length: time quadrature of sqrt(energy element). Slightly
// negative elements (quadrature noise) are clamped at 0 and counted; a clamp
// above 1e-8 times the largest element aborts with std::domain_error.
double distance(const SpacetimeField& phi, const TorusGrid& g, ClampStats* stats = nullptr);

// Covariant derivative of psi along the path phi:
//   D_t psi = psi_t + (W_t, grad psi),  W_t = -grad(phi_t) / (1 + lap phi).
// Defined at every time node. Throws std::domain_error if 1 + lap phi < guard
// anywhere.
SpacetimeField covariant_derivative(const SpacetimeField& phi, const SpacetimeField& psi,
                                    const TorusGrid& g, double guard = 1e-12);

// K(alpha, beta) = -integral of |d alpha wedge d beta|^2 / (1 + lap phi),
// central-difference gradients; identically 0 for d = 1. Always <= 0 up to
// rounding.
double sectional_curvature(const SpatialField& phi, const SpatialField& alpha,
                           const SpatialField& beta, const TorusGrid& g);

// The curvature operator on T^2 via the planar curl:
//   R_{alpha,beta}(psi) = (nu, grad psi),
//   nu = (1/(1+lap phi)) curl((1/(1+lap phi)) (grad alpha x grad beta)),
// curl(f) = (df/dx2, -df/dx1). Throws std::invalid_argument unless d = 2.
SpatialField curvature_apply_2d(const SpatialField& phi, const SpatialField& alpha,
                                const SpatialField& beta, const SpatialField& psi,
                                const TorusGrid& g);

// <R_{alpha,beta}(alpha), beta>_phi, the pairing form of the sectional
// curvature; cross-checks the integral formula to O(h^2).
double curvature_operator_2d(const SpatialField& phi, const SpatialField& alpha,
                             const SpatialField& beta, const TorusGrid& g);

// Uniform family of solved paths indexed by the deformation parameter s.
struct GeodesicFamily {
  std::vector<SpacetimeField> phis;  // one solved path per s sample
  double epsilon = 0.0;
  double s0 = 0.0;
  double ds = 0.0;

  int samples() const { return static_cast<int>(phis.size()); }
};

// d/ds of the family at sample si; central in s, one-sided second order at
// the ends. Requires >= 3 samples.
SpacetimeField family_s_derivative(const GeodesicFamily& fam, int si, const TorusGrid& g);

// |Y|(t_j) with Y = phi_s: sqrt of integral of Y^2 (1 + lap phi) on slice j
// of member si.
double jacobi_norm(const GeodesicFamily& fam, int si, int tj, const TorusGrid& g);

}  // namespace volform
