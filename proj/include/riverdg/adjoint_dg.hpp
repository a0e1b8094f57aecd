#pragma once

#include <functional>
#include <vector>

#include "riverdg/forward_dg.hpp"

namespace riverdg {

/// Adjoint pair (sigma1, sigma2) at one time level.
struct AdjointState {
  PiecewiseField sigma1;
  PiecewiseField sigma2;

  AdjointState() = default;
  AdjointState(const Mesh1D& mesh, Index degree)
      : sigma1(mesh, degree), sigma2(mesh, degree) {}
};

AdjointState lincomb(Scalar a, const AdjointState& x, Scalar b, const AdjointState& y);

/// Boundary misfit E = trace - measured on the forward solver's time grid.
/// Columns mirror BoundaryTrace: E_h(x0), E_hu(x0), E_h(xL), E_hu(xL).
struct MisfitTrace {
  Vec times;
  Mat values;

  Index size() const { return times.size(); }
  Vec2 left(Index i) const { return Vec2(values(i, 0), values(i, 1)); }
  Vec2 right(Index i) const { return Vec2(values(i, 2), values(i, 3)); }

  /// Componentwise linear interpolation in time.
  Vec2 left_at(Scalar t) const;
  Vec2 right_at(Scalar t) const;
};

/// E = trace - measured; both on the same grid.
MisfitTrace misfit_trace(const BoundaryTrace& trace, const BoundaryTrace& measured);

/// Adjoint solution history, times ascending over [0, T].
struct AdjointTrajectory {
  std::vector<Scalar> times;
  std::vector<AdjointState> states;

  AdjointState interpolate(Scalar t) const;
};

enum class BoundarySide { left, right };

/// A^T, S^T and C^T of the adjoint system at one point:
/// A^T = [[0, gh-u^2], [1, 2u]], S^T = [[0, -g B], [0, 0]], C^T = 0.
void adjoint_coefficients(Scalar h, Scalar hu, Scalar bottom_slope, Scalar g,
                          Mat2* a_t, Mat2* s_t, Mat2* c_t);

/// Prescribed boundary value -(A^T)^{-1} E at x0 and +(A^T)^{-1} E at xL,
/// with A^T built from the forward boundary state.  Near-critical flow
/// (|u^2 - g h| below 1e-10) raises SingularBoundaryError.
Vec2 adjoint_boundary_values(const Vec2& misfit, const Vec2& boundary_state, Scalar g,
                             BoundarySide side, Scalar time_for_errors = 0.0);

/// Spatial DG operator for the adjoint balance-law form
///   dsigma/dt + d/dx (A^T sigma) = (dA^T/dx - S^T) sigma
/// on its own (non-periodic) mesh.  The forward state is evaluated from its
/// own DG representation at this operator's quadrature points; exterior
/// traces at the domain ends are the prescribed boundary values.
class AdjointDGOperator {
 public:
  AdjointDGOperator(const Mesh1D& mesh, Index degree);

  const Mesh1D& mesh() const { return mesh_; }
  const QuadratureRule& quad() const { return quad_; }

  /// Physical-time residual r with dsigma/dt = r.
  AdjointState rhs(const AdjointState& sigma, const SWEState& forward_state,
                   const PiecewiseField& bottom_slope_field, Scalar g, Scalar alpha,
                   const Vec2& bc_left, const Vec2& bc_right) const;

 private:
  Mesh1D mesh_;
  Index degree_;
  QuadratureRule quad_;
  Mat phi_;
  Mat dphi_;
  Vec phi_right_;
  Vec phi_left_;
};

/// Free-function flavor of AdjointDGOperator::rhs for one-off evaluations.
AdjointState adjoint_rhs(const AdjointState& sigma, const SWEState& forward_state,
                         const PiecewiseField& bottom_slope_field, Scalar g,
                         Scalar alpha, const Vec2& bc_left, const Vec2& bc_right);

struct AdjointProblem {
  const Trajectory* forward;       ///< full forward history (step levels)
  const BoundaryTrace* trace;      ///< forward boundary trace (for A^T at ends)
  const MisfitTrace* misfit;       ///< E on the forward trace grid
  BottomTopography bottom;
  const ControlEvaluator* control; ///< p(t), for the S^T slope term
  Scalar gravity = 9.812;
};

/// Integrate the adjoint system backward from sigma(T) = 0 with SSP-RK3 on
/// the time-reversed form; forward states and misfit values at stage times
/// come from linear interpolation in time.  cfg supplies the adjoint mesh,
/// degree and CFL number; its limiter is ignored (the system is linear).
AdjointTrajectory solve_adjoint(const AdjointProblem& problem, const SolverConfig& cfg);

}  // namespace riverdg
