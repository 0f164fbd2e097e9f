#pragma once

#include <span>
#include <vector>

#include "volform/grid.hpp"

namespace volform {

// Second-order central stencil per axis with periodic wraparound,
// sum_a (f(x+h e_a) - 2 f(x) + f(x-h e_a)) / h^2.
SpatialField laplacian(const SpatialField& f, const TorusGrid& g);

// Central difference (f(x+h e_a) - f(x-h e_a)) / (2h) along one axis.
SpatialField gradient_axis(const SpatialField& f, const TorusGrid& g, int axis);

// min over nodes of 1 + lap(phi); positive means phi lies in the space of
// volume forms.
double min_admissibility(const SpatialField& phi, const TorusGrid& g);

// Throws std::invalid_argument if either endpoint violates 1+lap(phi) > margin.
void validate_boundary(const BoundaryPair& b, const TorusGrid& g, double margin = 0.0);

// Time derivatives of a spacetime field. phi_t is defined at every time node
// (central in the interior, one-sided second order at j=0 and j=nt-1).
// phi_tt and the mixed phi_tk live on interior time nodes only; their
// boundary slices are stored as zero.
struct TimeDerivatives {
  SpacetimeField t;
  SpacetimeField tt;
  std::vector<SpacetimeField> tk;  // one per spatial axis
};
TimeDerivatives time_derivatives(const SpacetimeField& phi, const TorusGrid& g);

// Geodesic-equation operator phi_tt (1 + lap phi) - sum_k phi_tk^2 on
// interior time nodes; boundary slices zero.
SpacetimeField q_op(const SpacetimeField& phi, const TorusGrid& g);

// Continuity-path operator s*q_op + (1-s)*(phi_tt + lap phi), interior only.
SpacetimeField p_op(double s, const SpacetimeField& phi, const TorusGrid& g);

// Coefficients of the linearization dP at (s, phi):
//   a = s phi_tt + (1-s),  b = s (1 + lap phi) + (1-s),  c_k = s phi_tk.
// Valid on interior time nodes; boundary slices zero.
struct OperatorCoefficients {
  SpacetimeField a;
  SpacetimeField b;
  std::vector<SpacetimeField> c;
};
OperatorCoefficients operator_coefficients(double s, const SpacetimeField& phi,
                                           const TorusGrid& g);

// dP(h) = a lap h + b h_tt - 2 sum_k c_k h_tk on interior time nodes.
// The exact Frechet derivative of p_op: for every h,
//   p_op(s, phi + h) = p_op(s, phi) + dp_apply(s, phi, h) + s*(q_op(h) - h_tt),
// the remainder being the pure quadratic part of q_op.
SpacetimeField dp_apply(const OperatorCoefficients& co, const SpacetimeField& h,
                        const TorusGrid& g);
SpacetimeField dp_apply(double s, const SpacetimeField& phi, const SpacetimeField& h,
                        const TorusGrid& g);

// Minima over interior nodes of a, b and phi_tt + 1 + lap phi. All three are
// strictly positive on an elliptic iterate.
struct EllipticityMargins {
  double min_a = 0.0;
  double min_b = 0.0;
  double min_f = 0.0;

  double worst() const { return std::min(min_a, std::min(min_b, min_f)); }
};
EllipticityMargins ellipticity_margins(double s, const SpacetimeField& phi,
                                       const TorusGrid& g);

// Sup over interior time nodes of |f|.
double interior_sup(const SpacetimeField& f, const TorusGrid& g);

// Symmetric (n+1) x (n+1) matrix, indices 0..n, dense row-major storage.
struct SymMatrix {
  int n = 0;                // block size parameter; matrix is (n+1) x (n+1)
  std::vector<double> a;    // (n+1)*(n+1) entries

  explicit SymMatrix(int n_) : n(n_), a(static_cast<size_t>(n_ + 1) * (n_ + 1), 0.0) {}
  double& at(int i, int j) { return a[static_cast<size_t>(i) * (n + 1) + j]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i) * (n + 1) + j]; }
  void set_sym(int i, int j, double v) {
    at(i, j) = v;
    at(j, i) = v;
  }
};

// Q(A) = A_00 sum_{i=1..n} A_ii - sum_{i=1..n} A_i0^2.
double matrix_q(const SymMatrix& A);

// log(x*y - sum z_i^2); throws std::domain_error outside x>0, y>0,
// x*y - sum z_i^2 > 0.
double log_q(double x, double y, std::span<const double> z);

}  // namespace volform
