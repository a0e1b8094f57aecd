#pragma once

#include <functional>

#include "riverdg/types.hpp"

namespace riverdg {

/// Uniform 1D mesh on [x0, xL] with n_cells cells.  Cell j covers
/// [x0 + j dx, x0 + (j+1) dx]; the reference map is x = center_j + (dx/2) xi.
struct Mesh1D {
  Scalar x0 = 0.0;
  Scalar xL = 1.0;
  Index n_cells = 1;
  bool periodic = true;

  Scalar dx() const { return (xL - x0) / static_cast<Scalar>(n_cells); }
  Scalar cell_left(Index j) const { return x0 + static_cast<Scalar>(j) * dx(); }
  Scalar cell_center(Index j) const { return cell_left(j) + 0.5 * dx(); }
  Scalar to_physical(Index j, Scalar xi) const {
    return cell_center(j) + 0.5 * dx() * xi;
  }

  /// Cell containing x (clamped to the valid range at the domain ends).
  Index locate(Scalar x) const;
  /// Reference coordinate of x inside cell j.
  Scalar to_reference(Index j, Scalar x) const {
    return 2.0 * (x - cell_center(j)) / dx();
  }

  bool operator==(const Mesh1D& o) const {
    return x0 == o.x0 && xL == o.xL && n_cells == o.n_cells;
  }
};

/// Gauss-Legendre rule on the reference cell [-1, 1].
struct QuadratureRule {
  Vec nodes;
  Vec weights;
  Index size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with n points (exact for polynomials up to degree 2n-1).
QuadratureRule gauss_legendre(Index n);

/// Values of the scaled Legendre basis phi_m(xi) = sqrt(2m+1) P_m(xi) for
/// m = 0..degree.  With this scaling int_{-1}^{1} phi_m phi_n dxi = 2 delta_mn
/// and the first modal coefficient of a field equals its cell average.
Vec basis_values(Index degree, Scalar xi);

/// d/dxi of the scaled basis.
Vec basis_derivatives(Index degree, Scalar xi);

/// Arbitrary-order reference derivative d^order/dxi^order of the scaled basis.
Vec basis_derivatives(Index degree, Scalar xi, Index order);

/// Modal DG representation of a scalar function: one polynomial per cell,
/// no continuity implied across interfaces.
struct PiecewiseField {
  Mesh1D mesh;
  Index degree = 0;
  Mat coeffs;  // n_cells x (degree+1)

  PiecewiseField() = default;
  PiecewiseField(const Mesh1D& m, Index k)
      : mesh(m), degree(k), coeffs(Mat::Zero(m.n_cells, k + 1)) {}

  Index n_cells() const { return mesh.n_cells; }
  Index n_modes() const { return degree + 1; }

  /// Cell average (the mean mode, by the basis scaling).
  Scalar cell_average(Index j) const { return coeffs(j, 0); }
};

PiecewiseField operator+(const PiecewiseField& a, const PiecewiseField& b);
PiecewiseField operator-(const PiecewiseField& a, const PiecewiseField& b);
PiecewiseField operator*(Scalar s, const PiecewiseField& a);

/// Cellwise L2 projection of f into the degree-k space on the given mesh.
/// Exact for polynomials of degree <= k when the rule is exact to degree 2k.
PiecewiseField project(const std::function<Scalar(Scalar)>& f, const Mesh1D& mesh,
                       Index degree, const QuadratureRule& quad);

/// Convenience: project with the default (degree+2)-point Gauss rule.
PiecewiseField project(const std::function<Scalar(Scalar)>& f, const Mesh1D& mesh,
                       Index degree);

/// Evaluate the cell-j polynomial at reference coordinate xi in [-1, 1].
/// xi = -1 gives the "+" trace of the cell's left interface, xi = +1 the "-"
/// trace of its right interface.
Scalar evaluate(const PiecewiseField& field, Index cell, Scalar xi);

/// Evaluate at a physical point.  `from_left` picks the cell whose closure
/// contains x from below when x sits exactly on an interface.
Scalar evaluate_at(const PiecewiseField& field, Scalar x, bool from_left = false);

/// Spatial derivative of the cell-j polynomial at xi (chain rule included).
Scalar evaluate_derivative(const PiecewiseField& field, Index cell, Scalar xi);

/// Integral of |a - b| over the domain, cellwise by quadrature.
Scalar l1_error(const PiecewiseField& a, const PiecewiseField& b,
                const QuadratureRule& quad);
Scalar l1_error(const PiecewiseField& a, const std::function<Scalar(Scalar)>& b,
                const QuadratureRule& quad);

/// Integral of a over the domain (exact from the mean modes).
Scalar integral(const PiecewiseField& a);

/// L2 norm over the domain computed from the modal coefficients.
Scalar l2_norm(const PiecewiseField& a);

}  // namespace riverdg
