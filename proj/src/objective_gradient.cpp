#include "riverdg/objective_gradient.hpp"

#include <cmath>

namespace riverdg {

Vec trapezoid_weights(const Vec& times) {
  const Index n = times.size();
  Vec w = Vec::Zero(n);
  for (Index i = 0; i + 1 < n; ++i) {
    const Scalar half = 0.5 * (times[i + 1] - times[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

Scalar misfit_j0(const MisfitTrace& misfit) {
  const Vec w = trapezoid_weights(misfit.times);
  Scalar total = 0.0;
  for (Index i = 0; i < misfit.size(); ++i) {
    total += w[i] * (0.5 * misfit.left(i).squaredNorm() +
                     0.5 * misfit.right(i).squaredNorm());
  }
  return total;
}

Scalar misfit_j0(const BoundaryTrace& trace, const BoundaryTrace& measured) {
  return misfit_j0(misfit_trace(trace, measured));
}

GradientSignal gradient_j0(const AdjointTrajectory& adjoint, const Trajectory& forward,
                           const BottomTopography& bottom, Scalar g,
                           const Vec& control_times) {
  const Mesh1D& mesh = adjoint.states.front().sigma1.mesh;
  const Index degree = adjoint.states.front().sigma1.degree;
  const QuadratureRule quad = gauss_legendre(degree + 2);
  Mat phi(quad.size(), degree + 1);
  for (Index q = 0; q < quad.size(); ++q)
    phi.row(q) = basis_values(degree, quad.nodes[q]).transpose();

  // b1' is time independent: precompute at all quadrature points
  Mat db1_q(mesh.n_cells, quad.size());
  for (Index j = 0; j < mesh.n_cells; ++j)
    for (Index q = 0; q < quad.size(); ++q)
      db1_q(j, q) = bottom.db1(mesh.to_physical(j, quad.nodes[q]));

  GradientSignal grad;
  grad.times = control_times;
  grad.values = Vec::Zero(control_times.size());
  for (Index i = 0; i < control_times.size(); ++i) {
    const Scalar t = control_times[i];
    const AdjointState sigma = adjoint.interpolate(t);
    const SWEState fstate = forward.interpolate(t);
    Scalar acc = 0.0;
    for (Index j = 0; j < mesh.n_cells; ++j) {
      Scalar cell = 0.0;
      for (Index q = 0; q < quad.size(); ++q) {
        const Scalar s2 = sigma.sigma2.coeffs.row(j).dot(phi.row(q));
        const Scalar h = evaluate_at(fstate.h, mesh.to_physical(j, quad.nodes[q]));
        cell += quad.weights[q] * (-g) * s2 * h * db1_q(j, q);
      }
      acc += 0.5 * mesh.dx() * cell;
    }
    grad.values[i] = acc;
  }
  return grad;
}

Scalar directional_derivative(const GradientSignal& grad, const ControlSignal& direction) {
  if (grad.times.size() != direction.times.size())
    throw DimensionError("directional_derivative: grids differ in length");
  if ((grad.times - direction.times).cwiseAbs().maxCoeff() >
      1e-9 * std::max(std::abs(grad.times[grad.times.size() - 1]), Scalar(1e-30)))
    throw DimensionError("directional_derivative: time grids differ");
  const Vec w = trapezoid_weights(grad.times);
  return (w.array() * grad.values.array() * direction.values.array()).sum();
}

}  // namespace riverdg
