#pragma once

#include "riverdg/adjoint_dg.hpp"
#include "riverdg/forward_dg.hpp"

namespace riverdg {

/// Cost bookkeeping for one optimizer iteration.  total applies the
/// regularization weights (and the L-curve scale) to the raw norms.
struct CostRecord {
  Scalar j0 = 0.0;
  Scalar r_l1 = 0.0;
  Scalar r_h1 = 0.0;
  Scalar total = 0.0;
};

/// Gradient of the misfit with respect to p, sampled on the control grid.
struct GradientSignal {
  Vec times;
  Vec values;
};

/// Boundary misfit functional: trapezoidal integral over the trace grid of
/// 0.5 |E(x0,t)|^2 + 0.5 |E(xL,t)|^2, E = trace - measured.
Scalar misfit_j0(const BoundaryTrace& trace, const BoundaryTrace& measured);
Scalar misfit_j0(const MisfitTrace& misfit);

/// Adjoint-based gradient on the control grid:
/// grad(t_i) = int -g sigma2(x, t_i) h(x, t_i) b1'(x) dx by Gauss quadrature
/// on the adjoint mesh, with h from the forward DG representation and b1'
/// analytic.
GradientSignal gradient_j0(const AdjointTrajectory& adjoint, const Trajectory& forward,
                           const BottomTopography& bottom, Scalar g,
                           const Vec& control_times);

/// Trapezoidal duality pairing int grad(t) dp(t) dt on the shared grid.
Scalar directional_derivative(const GradientSignal& grad, const ControlSignal& direction);

/// Trapezoidal weights of a (possibly nonuniform) time grid.
Vec trapezoid_weights(const Vec& times);

}  // namespace riverdg
