#include "riverdg/adjoint_dg.hpp"

#include <algorithm>
#include <cmath>

namespace riverdg {

namespace {
constexpr Scalar kCriticalTol = 1e-10;
constexpr Scalar kDryFloor = 1e-10;

Vec2 interp_row(const Vec& times, const Mat& values, Scalar t, Index col0) {
  const Index n = times.size();
  const Scalar span = times[n - 1] - times[0];
  const Scalar tol = 1e-9 * std::max(span, Scalar(1e-30));
  if (t < times[0] - tol || t > times[n - 1] + tol)
    throw InterpolationRangeError("trace interpolation outside stored span");
  if (t <= times[0]) return Vec2(values(0, col0), values(0, col0 + 1));
  if (t >= times[n - 1])
    return Vec2(values(n - 1, col0), values(n - 1, col0 + 1));
  Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const Index mid = (lo + hi) / 2;
    (times[mid] <= t ? lo : hi) = mid;
  }
  const Scalar w = (t - times[lo]) / (times[hi] - times[lo]);
  return Vec2((1.0 - w) * values(lo, col0) + w * values(hi, col0),
              (1.0 - w) * values(lo, col0 + 1) + w * values(hi, col0 + 1));
}

}  // namespace

AdjointState lincomb(Scalar a, const AdjointState& x, Scalar b, const AdjointState& y) {
  AdjointState out = x;
  out.sigma1.coeffs = a * x.sigma1.coeffs + b * y.sigma1.coeffs;
  out.sigma2.coeffs = a * x.sigma2.coeffs + b * y.sigma2.coeffs;
  return out;
}

Vec2 MisfitTrace::left_at(Scalar t) const { return interp_row(times, values, t, 0); }
Vec2 MisfitTrace::right_at(Scalar t) const { return interp_row(times, values, t, 2); }

MisfitTrace misfit_trace(const BoundaryTrace& trace, const BoundaryTrace& measured) {
  if (trace.size() != measured.size())
    throw DimensionError("misfit_trace: grids differ in length");
  if ((trace.times - measured.times).cwiseAbs().maxCoeff() >
      1e-9 * std::max(trace.times[trace.size() - 1], Scalar(1e-30)))
    throw DimensionError("misfit_trace: time grids differ");
  MisfitTrace m;
  m.times = trace.times;
  m.values = trace.values - measured.values;
  return m;
}

AdjointState AdjointTrajectory::interpolate(Scalar t) const {
  const Scalar t0 = times.front(), t1 = times.back();
  const Scalar tol = 1e-9 * std::max(t1 - t0, Scalar(1e-30));
  if (t < t0 - tol || t > t1 + tol)
    throw InterpolationRangeError("adjoint interpolation outside stored span");
  if (t <= t0) return states.front();
  if (t >= t1) return states.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const Index hi = static_cast<Index>(it - times.begin());
  const Index lo = hi - 1;
  const Scalar w = (t - times[lo]) / (times[hi] - times[lo]);
  return lincomb(1.0 - w, states[lo], w, states[hi]);
}

void adjoint_coefficients(Scalar h, Scalar hu, Scalar bottom_slope, Scalar g,
                          Mat2* a_t, Mat2* s_t, Mat2* c_t) {
  if (h <= kDryFloor) throw DryStateError(0.0, -1);
  const Scalar u = hu / h;
  if (a_t) *a_t << 0.0, g * h - u * u, 1.0, 2.0 * u;
  if (s_t) *s_t << 0.0, -g * bottom_slope, 0.0, 0.0;
  if (c_t) c_t->setZero();
}

Vec2 adjoint_boundary_values(const Vec2& misfit, const Vec2& boundary_state, Scalar g,
                             BoundarySide side, Scalar time_for_errors) {
  const Scalar h = boundary_state[0];
  if (h <= kDryFloor) throw DryStateError(time_for_errors, -1);
  const Scalar u = boundary_state[1] / h;
  const Scalar det = u * u - g * h;  // det(A^T)
  if (std::abs(det) < kCriticalTol) throw SingularBoundaryError(time_for_errors);
  // (A^T)^{-1} = 1/det [[2u, u^2 - g h], [-1, 0]]
  Mat2 inv;
  inv << 2.0 * u / det, 1.0, -1.0 / det, 0.0;
  const Vec2 value = inv * misfit;
  return side == BoundarySide::left ? Vec2(-value) : value;
}

AdjointDGOperator::AdjointDGOperator(const Mesh1D& mesh, Index degree)
    : mesh_(mesh), degree_(degree), quad_(gauss_legendre(degree + 2)) {
  const Index nq = quad_.size();
  phi_.resize(nq, degree + 1);
  dphi_.resize(nq, degree + 1);
  for (Index q = 0; q < nq; ++q) {
    phi_.row(q) = basis_values(degree, quad_.nodes[q]).transpose();
    dphi_.row(q) = basis_derivatives(degree, quad_.nodes[q]).transpose();
  }
  phi_right_ = basis_values(degree, 1.0);
  phi_left_ = basis_values(degree, -1.0);
}

AdjointState AdjointDGOperator::rhs(const AdjointState& sigma,
                                    const SWEState& forward_state,
                                    const PiecewiseField& bottom_slope_field, Scalar g,
                                    Scalar alpha, const Vec2& bc_left,
                                    const Vec2& bc_right) const {
  const Index n = mesh_.n_cells;
  const Index nm = degree_ + 1;
  const Index nq = quad_.size();
  const Scalar dx = mesh_.dx();

  auto a_transpose_at = [&](Scalar x, bool from_left) {
    const Scalar h = evaluate_at(forward_state.h, x, from_left);
    const Scalar hu = evaluate_at(forward_state.hu, x, from_left);
    if (h <= kDryFloor) throw DryStateError(0.0, -1);
    const Scalar u = hu / h;
    Mat2 a_t;
    a_t << 0.0, g * h - u * u, 1.0, 2.0 * u;
    return a_t;
  };

  // Interface fluxes: interface i sits at the left edge of cell i, i = 0..n.
  Mat fluxes(n + 1, 2);
  for (Index i = 0; i <= n; ++i) {
    const Scalar x = mesh_.x0 + static_cast<Scalar>(i) * dx;
    Vec2 sigma_minus, sigma_plus;
    Mat2 a_minus, a_plus;
    if (i == 0) {
      sigma_minus = bc_left;
      sigma_plus = Vec2(sigma.sigma1.coeffs.row(0).dot(phi_left_),
                        sigma.sigma2.coeffs.row(0).dot(phi_left_));
      a_minus = a_plus = a_transpose_at(x, false);
    } else if (i == n) {
      sigma_minus = Vec2(sigma.sigma1.coeffs.row(n - 1).dot(phi_right_),
                         sigma.sigma2.coeffs.row(n - 1).dot(phi_right_));
      sigma_plus = bc_right;
      a_minus = a_plus = a_transpose_at(x, true);
    } else {
      sigma_minus = Vec2(sigma.sigma1.coeffs.row(i - 1).dot(phi_right_),
                         sigma.sigma2.coeffs.row(i - 1).dot(phi_right_));
      sigma_plus = Vec2(sigma.sigma1.coeffs.row(i).dot(phi_left_),
                        sigma.sigma2.coeffs.row(i).dot(phi_left_));
      a_minus = a_transpose_at(x, true);
      a_plus = a_transpose_at(x, false);
    }
    const Vec2 flux = 0.5 * (a_minus * sigma_minus + a_plus * sigma_plus -
                             alpha * (sigma_plus - sigma_minus));
    fluxes.row(i) = flux.transpose();
  }

  AdjointState out(mesh_, degree_);
  for (Index j = 0; j < n; ++j) {
    Mat vol = Mat::Zero(2, nm);
    Mat src = Mat::Zero(2, nm);
    for (Index q = 0; q < nq; ++q) {
      const Scalar x = mesh_.to_physical(j, quad_.nodes[q]);
      const Scalar h = evaluate_at(forward_state.h, x);
      const Scalar hu = evaluate_at(forward_state.hu, x);
      if (h <= kDryFloor) throw DryStateError(0.0, j);
      const Scalar u = hu / h;
      const Index fj = forward_state.h.mesh.locate(x);
      const Scalar fxi = forward_state.h.mesh.to_reference(fj, x);
      const Scalar dh = evaluate_derivative(forward_state.h, fj, fxi);
      const Scalar dhu = evaluate_derivative(forward_state.hu, fj, fxi);
      const Scalar du = (dhu - u * dh) / h;

      Mat2 a_t;
      a_t << 0.0, g * h - u * u, 1.0, 2.0 * u;
      Mat2 da_t;  // x-derivative of A^T from the forward DG representation
      da_t << 0.0, g * dh - 2.0 * u * du, 0.0, 2.0 * du;
      const Scalar slope = bottom_slope_field.coeffs.row(j).dot(phi_.row(q));
      Mat2 s_t;
      s_t << 0.0, -g * slope, 0.0, 0.0;

      const Vec2 sig(sigma.sigma1.coeffs.row(j).dot(phi_.row(q)),
                     sigma.sigma2.coeffs.row(j).dot(phi_.row(q)));
      const Vec2 a_sig = a_t * sig;
      const Vec2 m_sig = (da_t - s_t) * sig;
      vol += quad_.weights[q] * a_sig * dphi_.row(q);
      src += quad_.weights[q] * m_sig * phi_.row(q);
    }
    for (Index m = 0; m < nm; ++m) {
      out.sigma1.coeffs(j, m) = (vol(0, m) - fluxes(j + 1, 0) * phi_right_[m] +
                                 fluxes(j, 0) * phi_left_[m]) /
                                    dx +
                                0.5 * src(0, m);
      out.sigma2.coeffs(j, m) = (vol(1, m) - fluxes(j + 1, 1) * phi_right_[m] +
                                 fluxes(j, 1) * phi_left_[m]) /
                                    dx +
                                0.5 * src(1, m);
    }
  }
  return out;
}

AdjointState adjoint_rhs(const AdjointState& sigma, const SWEState& forward_state,
                         const PiecewiseField& bottom_slope_field, Scalar g,
                         Scalar alpha, const Vec2& bc_left, const Vec2& bc_right) {
  AdjointDGOperator op(sigma.sigma1.mesh, sigma.sigma1.degree);
  return op.rhs(sigma, forward_state, bottom_slope_field, g, alpha, bc_left, bc_right);
}

AdjointTrajectory solve_adjoint(const AdjointProblem& problem, const SolverConfig& cfg) {
  const Trajectory& fwd = *problem.forward;
  const Scalar T = fwd.t_end();
  const Scalar g = problem.gravity;
  const Mesh1D fwd_mesh = fwd.states.front().h.mesh;

  Mesh1D mesh{fwd_mesh.x0, fwd_mesh.xL, cfg.n_cells, false};
  AdjointDGOperator op(mesh, cfg.degree);
  ForwardDGOperator wavespeed_op(fwd_mesh, fwd.states.front().h.degree);

  const PiecewiseField db0 = project(problem.bottom.db0, mesh, cfg.degree, op.quad());
  const PiecewiseField db1 = project(problem.bottom.db1, mesh, cfg.degree, op.quad());

  // Physical-time residual; tau = T - t reverses the sign.
  auto rhs_at = [&](const AdjointState& s, Scalar t) {
    const SWEState fstate = fwd.interpolate(t);
    const Scalar alpha = wavespeed_op.max_wavespeed(fstate, g);
    PiecewiseField slope = db0;
    slope.coeffs += problem.control->at(t) * db1.coeffs;
    const Vec2 u_left = interp_row(problem.trace->times, problem.trace->values, t, 0);
    const Vec2 u_right = interp_row(problem.trace->times, problem.trace->values, t, 2);
    const Vec2 bc_left = adjoint_boundary_values(problem.misfit->left_at(t), u_left, g,
                                                 BoundarySide::left, t);
    const Vec2 bc_right = adjoint_boundary_values(problem.misfit->right_at(t), u_right,
                                                  g, BoundarySide::right, t);
    return op.rhs(s, fstate, slope, g, alpha, bc_left, bc_right);
  };

  AdjointState state(mesh, cfg.degree);  // sigma(x, T) = 0
  std::vector<Scalar> phys_times{T};
  std::vector<AdjointState> states{state};

  Scalar tau = 0.0;
  const Scalar t_eps = 1e-14 * std::max(T, Scalar(1.0));
  while (tau < T - t_eps) {
    const Scalar alpha =
        wavespeed_op.max_wavespeed(fwd.interpolate(T - tau), g);
    Scalar dtau = cfg.effective_cfl() * mesh.dx() / alpha;
    if (tau + dtau > T) dtau = T - tau;
    // SSP-RK3 on dsigma/dtau = -r(sigma, T - tau)
    auto rev = [&](const AdjointState& s, Scalar tau_stage) {
      return lincomb(-1.0, rhs_at(s, T - tau_stage), 0.0, s);
    };
    const AdjointState s1 = lincomb(1.0, state, dtau, rev(state, tau));
    const AdjointState s2 =
        lincomb(0.75, state, 0.25, lincomb(1.0, s1, dtau, rev(s1, tau + dtau)));
    state = lincomb(1.0 / 3.0, state, 2.0 / 3.0,
                    lincomb(1.0, s2, dtau, rev(s2, tau + 0.5 * dtau)));
    tau += dtau;
    phys_times.push_back(T - tau);
    states.push_back(state);
  }

  AdjointTrajectory result;
  result.times.assign(phys_times.rbegin(), phys_times.rend());
  result.states.assign(states.rbegin(), states.rend());
  // guard against roundoff in the final reversed time
  result.times.front() = std::max(result.times.front(), Scalar(0.0));
  if (std::abs(result.times.front()) < 1e-13 * std::max(T, Scalar(1.0)))
    result.times.front() = 0.0;
  return result;
}

}  // namespace riverdg
