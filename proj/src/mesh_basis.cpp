#include "riverdg/mesh_basis.hpp"

#include <cmath>

namespace riverdg {

Index Mesh1D::locate(Scalar x) const {
  const Index j = static_cast<Index>(std::floor((x - x0) / dx()));
  if (j < 0) return 0;
  if (j >= n_cells) return n_cells - 1;
  return j;
}

QuadratureRule gauss_legendre(Index n) {
  QuadratureRule rule;
  rule.nodes = Vec::Zero(n);
  rule.weights = Vec::Zero(n);
  // Newton iteration on P_n with the Chebyshev-based initial guess.
  for (Index i = 0; i < n; ++i) {
    Scalar x = std::cos(M_PI * (static_cast<Scalar>(i) + 0.75) /
                        (static_cast<Scalar>(n) + 0.5));
    for (int it = 0; it < 100; ++it) {
      // P_n(x) and P_n'(x) by the three-term recurrence.
      Scalar p0 = 1.0, p1 = x;
      for (Index m = 1; m < n; ++m) {
        const Scalar p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
        p0 = p1;
        p1 = p2;
      }
      const Scalar dp = n * (x * p1 - p0) / (x * x - 1.0);
      const Scalar step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    Scalar p0 = 1.0, p1 = x;
    for (Index m = 1; m < n; ++m) {
      const Scalar p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
      p0 = p1;
      p1 = p2;
    }
    const Scalar dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

Vec basis_values(Index degree, Scalar xi) {
  Vec phi(degree + 1);
  Scalar p0 = 1.0, p1 = xi;
  phi[0] = 1.0;
  if (degree >= 1) phi[1] = std::sqrt(3.0) * xi;
  for (Index m = 1; m < degree; ++m) {
    const Scalar p2 = ((2.0 * m + 1.0) * xi * p1 - m * p0) / (m + 1.0);
    phi[m + 1] = std::sqrt(2.0 * (m + 1.0) + 1.0) * p2;
    p0 = p1;
    p1 = p2;
  }
  return phi;
}

Vec basis_derivatives(Index degree, Scalar xi) {
  return basis_derivatives(degree, xi, 1);
}

Vec basis_derivatives(Index degree, Scalar xi, Index order) {
  // d-th derivatives of P_m via P'_{m+1} = P'_{m-1} + (2m+1) P_m applied
  // levelwise: row d holds P^{(d)}_m for m = 0..degree.
  Mat table = Mat::Zero(order + 1, degree + 1);
  {
    Scalar p0 = 1.0, p1 = xi;
    table(0, 0) = 1.0;
    if (degree >= 1) table(0, 1) = xi;
    for (Index m = 1; m < degree; ++m) {
      const Scalar p2 = ((2.0 * m + 1.0) * xi * p1 - m * p0) / (m + 1.0);
      table(0, m + 1) = p2;
      p0 = p1;
      p1 = p2;
    }
  }
  for (Index d = 1; d <= order; ++d) {
    for (Index m = 0; m <= degree; ++m) {
      if (m < d) {
        table(d, m) = 0.0;
        continue;
      }
      // P^{(d)}_m = P^{(d)}_{m-2} + (2m-1) P^{(d-1)}_{m-1}
      const Scalar lower = (m >= 2) ? table(d, m - 2) : 0.0;
      table(d, m) = lower + (2.0 * m - 1.0) * table(d - 1, m - 1);
    }
  }
  Vec out(degree + 1);
  for (Index m = 0; m <= degree; ++m)
    out[m] = std::sqrt(2.0 * m + 1.0) * table(order, m);
  return out;
}

PiecewiseField operator+(const PiecewiseField& a, const PiecewiseField& b) {
  if (!(a.mesh == b.mesh) || a.degree != b.degree)
    throw DimensionError("field sum: mesh/degree mismatch");
  PiecewiseField out = a;
  out.coeffs += b.coeffs;
  return out;
}

PiecewiseField operator-(const PiecewiseField& a, const PiecewiseField& b) {
  if (!(a.mesh == b.mesh) || a.degree != b.degree)
    throw DimensionError("field difference: mesh/degree mismatch");
  PiecewiseField out = a;
  out.coeffs -= b.coeffs;
  return out;
}

PiecewiseField operator*(Scalar s, const PiecewiseField& a) {
  PiecewiseField out = a;
  out.coeffs *= s;
  return out;
}

PiecewiseField project(const std::function<Scalar(Scalar)>& f, const Mesh1D& mesh,
                       Index degree, const QuadratureRule& quad) {
  PiecewiseField field(mesh, degree);
  Mat phi(quad.size(), degree + 1);
  for (Index q = 0; q < quad.size(); ++q)
    phi.row(q) = basis_values(degree, quad.nodes[q]).transpose();
  for (Index j = 0; j < mesh.n_cells; ++j) {
    for (Index q = 0; q < quad.size(); ++q) {
      const Scalar fx = f(mesh.to_physical(j, quad.nodes[q]));
      // c_m = (1/|I_j|) int f phi_m dx = (1/2) int f(x(xi)) phi_m(xi) dxi
      field.coeffs.row(j) += 0.5 * quad.weights[q] * fx * phi.row(q);
    }
  }
  return field;
}

PiecewiseField project(const std::function<Scalar(Scalar)>& f, const Mesh1D& mesh,
                       Index degree) {
  return project(f, mesh, degree, gauss_legendre(degree + 2));
}

Scalar evaluate(const PiecewiseField& field, Index cell, Scalar xi) {
  return field.coeffs.row(cell).dot(basis_values(field.degree, xi));
}

Scalar evaluate_at(const PiecewiseField& field, Scalar x, bool from_left) {
  const Mesh1D& mesh = field.mesh;
  Index j = mesh.locate(x);
  Scalar xi = mesh.to_reference(j, x);
  constexpr Scalar tol = 1e-12;
  if (from_left) {
    if (xi < -1.0 + tol && j > 0) {
      --j;
      xi = mesh.to_reference(j, x);
    }
  } else if (xi > 1.0 - tol && j + 1 < mesh.n_cells) {
    ++j;
    xi = mesh.to_reference(j, x);
  }
  if (xi > 1.0) xi = 1.0;
  if (xi < -1.0) xi = -1.0;
  return evaluate(field, j, xi);
}

Scalar evaluate_derivative(const PiecewiseField& field, Index cell, Scalar xi) {
  const Scalar dxi_dx = 2.0 / field.mesh.dx();
  return dxi_dx * field.coeffs.row(cell).dot(basis_derivatives(field.degree, xi));
}

Scalar l1_error(const PiecewiseField& a, const PiecewiseField& b,
                const QuadratureRule& quad) {
  if (!(a.mesh == b.mesh) || a.degree != b.degree)
    throw DimensionError("l1_error: mesh/degree mismatch");
  Scalar total = 0.0;
  for (Index j = 0; j < a.n_cells(); ++j) {
    Scalar cell_sum = 0.0;
    for (Index q = 0; q < quad.size(); ++q) {
      const Vec phi = basis_values(a.degree, quad.nodes[q]);
      const Scalar va = a.coeffs.row(j).dot(phi);
      const Scalar vb = b.coeffs.row(j).dot(phi);
      cell_sum += quad.weights[q] * std::abs(va - vb);
    }
    total += 0.5 * a.mesh.dx() * cell_sum;
  }
  return total;
}

Scalar l1_error(const PiecewiseField& a, const std::function<Scalar(Scalar)>& b,
                const QuadratureRule& quad) {
  Scalar total = 0.0;
  for (Index j = 0; j < a.n_cells(); ++j) {
    Scalar cell_sum = 0.0;
    for (Index q = 0; q < quad.size(); ++q) {
      const Scalar va = evaluate(a, j, quad.nodes[q]);
      const Scalar vb = b(a.mesh.to_physical(j, quad.nodes[q]));
      cell_sum += quad.weights[q] * std::abs(va - vb);
    }
    total += 0.5 * a.mesh.dx() * cell_sum;
  }
  return total;
}

Scalar integral(const PiecewiseField& a) {
  return a.mesh.dx() * a.coeffs.col(0).sum();
}

Scalar l2_norm(const PiecewiseField& a) {
  return std::sqrt(a.mesh.dx() * a.coeffs.squaredNorm());
}

}  // namespace riverdg
