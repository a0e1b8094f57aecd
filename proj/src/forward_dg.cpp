#include "riverdg/forward_dg.hpp"

#include <algorithm>
#include <cmath>

namespace riverdg {

namespace {
constexpr Scalar kDryFloor = 1e-10;
constexpr Scalar kWavespeedCap = 1e8;
}  // namespace

SWEState lincomb(Scalar a, const SWEState& x, Scalar b, const SWEState& y) {
  SWEState out = x;
  out.h.coeffs = a * x.h.coeffs + b * y.h.coeffs;
  out.hu.coeffs = a * x.hu.coeffs + b * y.hu.coeffs;
  return out;
}

Scalar ControlSignal::eval(Scalar t) const {
  const Index n = times.size();
  const Scalar span = t_end() - t_begin();
  const Scalar tol = 1e-9 * std::max(span, Scalar(1e-30));
  if (t < t_begin() - tol || t > t_end() + tol)
    throw InterpolationRangeError("control evaluated at t=" + std::to_string(t) +
                                  " outside [" + std::to_string(t_begin()) + ", " +
                                  std::to_string(t_end()) + "]");
  if (t <= t_begin()) return values[0];
  if (t >= t_end()) return values[n - 1];
  // first index with times[i] > t
  Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const Index mid = (lo + hi) / 2;
    (times[mid] <= t ? lo : hi) = mid;
  }
  const Scalar w = (t - times[lo]) / (times[hi] - times[lo]);
  return (1.0 - w) * values[lo] + w * values[hi];
}

Index ControlSignal::grid_index(Scalar t) const {
  const Scalar span = t_end() - t_begin();
  const Scalar tol = 1e-9 * std::max(span, Scalar(1e-30));
  Index lo = 0, hi = times.size() - 1;
  while (hi - lo > 1) {
    const Index mid = (lo + hi) / 2;
    (times[mid] <= t ? lo : hi) = mid;
  }
  if (std::abs(times[lo] - t) <= tol) return lo;
  if (std::abs(times[hi] - t) <= tol) return hi;
  return -1;
}

ControlSignal ControlSignal::sample(const std::function<Scalar(Scalar)>& f,
                                    const Vec& grid) {
  ControlSignal s;
  s.times = grid;
  s.values = grid.unaryExpr(f);
  return s;
}

Scalar SampledControl::at_half_stage(Scalar t_prev, Scalar t_n, Scalar t_next) const {
  const Scalar mid = 0.5 * (t_n + t_next);
  const Index i_n = signal_->grid_index(t_n);
  const Index i_next = signal_->grid_index(t_next);
  if (i_n < 0 || i_next < 0) return signal_->eval(mid);
  const Scalar v_n = signal_->values[i_n];
  const Scalar v_next = signal_->values[i_next];
  if (std::isnan(t_prev)) return 0.5 * (v_n + v_next);  // first step: linear
  const Index i_prev = signal_->grid_index(t_prev);
  if (i_prev < 0 || i_prev == i_n) return signal_->eval(mid);
  const Scalar ta = signal_->times[i_prev], tb = signal_->times[i_n],
               tc = signal_->times[i_next];
  const Scalar va = signal_->values[i_prev];
  // quadratic Lagrange through (ta,va), (tb,v_n), (tc,v_next) at mid
  const Scalar la = (mid - tb) * (mid - tc) / ((ta - tb) * (ta - tc));
  const Scalar lb = (mid - ta) * (mid - tc) / ((tb - ta) * (tb - tc));
  const Scalar lc = (mid - ta) * (mid - tb) / ((tc - ta) * (tc - tb));
  return la * va + lb * v_n + lc * v_next;
}

SWEState Trajectory::interpolate(Scalar t) const {
  if (states.size() != times.size())
    throw InterpolationRangeError("trajectory states were not stored");
  const Scalar span = t_end() - t_begin();
  const Scalar tol = 1e-9 * std::max(span, Scalar(1e-30));
  if (t < t_begin() - tol || t > t_end() + tol)
    throw InterpolationRangeError("trajectory interpolation outside stored span");
  if (t <= t_begin()) return states.front();
  if (t >= t_end()) return states.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const Index hi = static_cast<Index>(it - times.begin());
  const Index lo = hi - 1;
  const Scalar w = (t - times[lo]) / (times[hi] - times[lo]);
  return lincomb(1.0 - w, states[lo], w, states[hi]);
}

Vec2 physical_flux(Scalar h, Scalar hu, Scalar g) {
  if (h <= 0.0) throw DryStateError(0.0, -1);
  return Vec2(hu, hu * hu / h + 0.5 * g * h * h);
}

Vec2 lax_friedrichs_flux(const Vec2& uL, const Vec2& uR, Scalar alpha, Scalar g) {
  const Vec2 fL = physical_flux(uL[0], uL[1], g);
  const Vec2 fR = physical_flux(uR[0], uR[1], g);
  return 0.5 * (fL + fR - alpha * (uR - uL));
}

ForwardDGOperator::ForwardDGOperator(const Mesh1D& mesh, Index degree)
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

Scalar ForwardDGOperator::max_wavespeed(const SWEState& state, Scalar g) const {
  Scalar alpha = 0.0;
  const Index n = mesh_.n_cells;
  auto absorb = [&](Scalar h, Scalar hu, Index j) {
    if (h <= kDryFloor) throw DryStateError(0.0, j);
    alpha = std::max(alpha, std::abs(hu / h) + std::sqrt(g * h));
  };
  for (Index j = 0; j < n; ++j) {
    for (Index q = 0; q < quad_.size(); ++q) {
      absorb(state.h.coeffs.row(j).dot(phi_.row(q)),
             state.hu.coeffs.row(j).dot(phi_.row(q)), j);
    }
    absorb(state.h.coeffs.row(j).dot(phi_left_), state.hu.coeffs.row(j).dot(phi_left_), j);
    absorb(state.h.coeffs.row(j).dot(phi_right_), state.hu.coeffs.row(j).dot(phi_right_), j);
  }
  return alpha;
}

SWEState ForwardDGOperator::rhs(const SWEState& state, const PiecewiseField& bottom_B,
                                Scalar g, Scalar time_for_errors) const {
  const Index n = mesh_.n_cells;
  const Index nm = degree_ + 1;
  const Index nq = quad_.size();
  const Scalar dx = mesh_.dx();

  // Global wavespeed bound for the Lax-Friedrichs dissipation.
  Scalar alpha = 0.0;

  // Traces: column 0/1 = (h, hu) at xi=-1, column 2/3 at xi=+1.
  Mat traces(n, 4);
  for (Index j = 0; j < n; ++j) {
    traces(j, 0) = state.h.coeffs.row(j).dot(phi_left_);
    traces(j, 1) = state.hu.coeffs.row(j).dot(phi_left_);
    traces(j, 2) = state.h.coeffs.row(j).dot(phi_right_);
    traces(j, 3) = state.hu.coeffs.row(j).dot(phi_right_);
  }

  // Point values at quadrature nodes.
  Mat hq(n, nq), huq(n, nq), bq(n, nq);
  for (Index j = 0; j < n; ++j) {
    for (Index q = 0; q < nq; ++q) {
      hq(j, q) = state.h.coeffs.row(j).dot(phi_.row(q));
      huq(j, q) = state.hu.coeffs.row(j).dot(phi_.row(q));
      bq(j, q) = bottom_B.coeffs.row(j).dot(phi_.row(q));
      if (hq(j, q) <= kDryFloor) throw DryStateError(time_for_errors, j);
      alpha = std::max(alpha, std::abs(huq(j, q) / hq(j, q)) + std::sqrt(g * hq(j, q)));
    }
    for (int side = 0; side < 2; ++side) {
      const Scalar th = traces(j, 2 * side), thu = traces(j, 2 * side + 1);
      if (th <= kDryFloor) throw DryStateError(time_for_errors, j);
      alpha = std::max(alpha, std::abs(thu / th) + std::sqrt(g * th));
    }
  }
  if (!std::isfinite(alpha) || alpha > kWavespeedCap)
    throw NumericalError("CFL failure: wavespeed blow-up at t=" +
                         std::to_string(time_for_errors));

  // Interface fluxes; interface j sits at the right edge of cell j (periodic).
  Mat fluxes(n, 2);
  for (Index j = 0; j < n; ++j) {
    const Index jr = (j + 1 == n) ? 0 : j + 1;
    const Vec2 uL(traces(j, 2), traces(j, 3));
    const Vec2 uR(traces(jr, 0), traces(jr, 1));
    fluxes.row(j) = lax_friedrichs_flux(uL, uR, alpha, g).transpose();
  }

  SWEState out(mesh_, degree_);
  for (Index j = 0; j < n; ++j) {
    const Index jl = (j == 0) ? n - 1 : j - 1;
    for (Index m = 0; m < nm; ++m) {
      Scalar vol_h = 0.0, vol_hu = 0.0, src_hu = 0.0;
      for (Index q = 0; q < nq; ++q) {
        const Scalar h = hq(j, q), hu = huq(j, q);
        const Scalar f1 = hu;
        const Scalar f2 = hu * hu / h + 0.5 * g * h * h;
        vol_h += quad_.weights[q] * f1 * dphi_(q, m);
        vol_hu += quad_.weights[q] * f2 * dphi_(q, m);
        src_hu += quad_.weights[q] * (-g * h * bq(j, q)) * phi_(q, m);
      }
      out.h.coeffs(j, m) =
          (vol_h - fluxes(j, 0) * phi_right_[m] + fluxes(jl, 0) * phi_left_[m]) / dx;
      out.hu.coeffs(j, m) =
          (vol_hu - fluxes(j, 1) * phi_right_[m] + fluxes(jl, 1) * phi_left_[m]) / dx +
          0.5 * src_hu;
    }
  }
  return out;
}

Scalar max_wavespeed(const SWEState& state, Scalar g) {
  return ForwardDGOperator(state.h.mesh, state.h.degree).max_wavespeed(state, g);
}

SWEState semi_discrete_rhs(const SWEState& state, const PiecewiseField& bottom_B,
                           Scalar g) {
  return ForwardDGOperator(state.h.mesh, state.h.degree).rhs(state, bottom_B, g);
}

namespace {

struct StepContext {
  const ForwardDGOperator& op;
  const PiecewiseField& db0;  // projected b0'
  const PiecewiseField& db1;  // projected b1'
  Scalar g;
  LimiterSpec limiter;
};

SWEState rk3_step_impl(const StepContext& ctx, const SWEState& state, Scalar t,
                       Scalar dt, Scalar p_n, Scalar p_next, Scalar p_half) {
  auto bottom_at = [&](Scalar p) {
    PiecewiseField b = ctx.db0;
    b.coeffs += p * ctx.db1.coeffs;
    return b;
  };
  auto limit = [&](SWEState s) {
    if (ctx.limiter.kind == LimiterKind::none) return s;
    return apply_limiter(s, ctx.limiter, ctx.g);
  };

  const PiecewiseField b_n = bottom_at(p_n);
  const PiecewiseField b_next = bottom_at(p_next);
  const PiecewiseField b_half = bottom_at(p_half);

  SWEState u1 = lincomb(1.0, state, dt, ctx.op.rhs(state, b_n, ctx.g, t));
  u1 = limit(u1);
  SWEState u2 = lincomb(0.75, state, 0.25,
                        lincomb(1.0, u1, dt, ctx.op.rhs(u1, b_next, ctx.g, t + dt)));
  u2 = limit(u2);
  SWEState un =
      lincomb(1.0 / 3.0, state, 2.0 / 3.0,
              lincomb(1.0, u2, dt, ctx.op.rhs(u2, b_half, ctx.g, t + 0.5 * dt)));
  return limit(un);
}

}  // namespace

SWEState ssp_rk3_step(const SWEState& state, Scalar t, Scalar dt,
                      const BottomTopography& bottom, const ControlSignal& p,
                      const SolverConfig& cfg, Scalar t_prev) {
  const Mesh1D& mesh = state.h.mesh;
  ForwardDGOperator op(mesh, state.h.degree);
  const PiecewiseField db0 = project(bottom.db0, mesh, state.h.degree, op.quad());
  const PiecewiseField db1 = project(bottom.db1, mesh, state.h.degree, op.quad());
  StepContext ctx{op, db0, db1, cfg.gravity, cfg.limiter};
  SampledControl pc(p);
  return rk3_step_impl(ctx, state, t, dt, pc.at(t), pc.at(t + dt),
                       pc.at_half_stage(t_prev, t, t + dt));
}

ForwardResult solve_forward(const SWEState& ic, const BottomTopography& bottom,
                            const ControlEvaluator& p, const SolverConfig& cfg,
                            bool store_trajectory) {
  const Mesh1D& mesh = ic.h.mesh;
  if (!mesh.periodic)
    throw DimensionError("solve_forward requires a periodic mesh");
  if (ic.h.degree != cfg.degree || mesh.n_cells != cfg.n_cells)
    throw DimensionError("solve_forward: initial state does not match config");

  ForwardDGOperator op(mesh, cfg.degree);
  const PiecewiseField db0 = project(bottom.db0, mesh, cfg.degree, op.quad());
  const PiecewiseField db1 = project(bottom.db1, mesh, cfg.degree, op.quad());
  StepContext ctx{op, db0, db1, cfg.gravity, cfg.limiter};

  SWEState state = ic;
  if (cfg.limiter.kind != LimiterKind::none)
    state = apply_limiter(state, cfg.limiter, cfg.gravity);

  const Scalar T = cfg.final_time;
  const bool scheduled = !cfg.scheduled_times.empty();

  std::vector<Scalar> times;
  std::vector<SWEState> states;
  std::vector<Eigen::Matrix<Scalar, 1, 4>> trace_rows;
  auto record = [&](Scalar t, const SWEState& s) {
    times.push_back(t);
    if (store_trajectory) states.push_back(s);
    Eigen::Matrix<Scalar, 1, 4> row;
    row << evaluate(s.h, 0, -1.0), evaluate(s.hu, 0, -1.0),
        evaluate(s.h, mesh.n_cells - 1, 1.0), evaluate(s.hu, mesh.n_cells - 1, 1.0);
    trace_rows.push_back(row);
  };

  Scalar t = 0.0;
  Scalar t_prev = std::numeric_limits<Scalar>::quiet_NaN();
  record(t, state);
  std::size_t step = 0;
  const Scalar t_eps = 1e-14 * std::max(T, Scalar(1.0));
  while (t < T - t_eps) {
    Scalar dt;
    if (scheduled) {
      if (step + 1 >= cfg.scheduled_times.size())
        throw NumericalError("scheduled step list exhausted before final_time");
      dt = cfg.scheduled_times[step + 1] - cfg.scheduled_times[step];
    } else {
      const Scalar alpha = op.max_wavespeed(state, cfg.gravity);
      if (!std::isfinite(alpha) || alpha > kWavespeedCap)
        throw NumericalError("CFL failure: wavespeed blow-up at t=" + std::to_string(t));
      dt = cfg.effective_cfl() * mesh.dx() / alpha;
      if (t + dt > T) dt = T - t;
    }
    const Scalar p_n = p.at(t);
    const Scalar p_next = p.at(t + dt);
    const Scalar p_half = p.at_half_stage(t_prev, t, t + dt);
    state = rk3_step_impl(ctx, state, t, dt, p_n, p_next, p_half);
    t_prev = t;
    t += dt;
    ++step;
    record(t, state);
  }

  ForwardResult result;
  result.trajectory.times = times;
  if (store_trajectory) result.trajectory.states = std::move(states);
  BoundaryTrace& trace = result.trace;
  trace.times = Eigen::Map<Vec>(times.data(), static_cast<Index>(times.size()));
  trace.values.resize(static_cast<Index>(trace_rows.size()), 4);
  for (Index i = 0; i < trace.values.rows(); ++i)
    trace.values.row(i) = trace_rows[static_cast<std::size_t>(i)];
  return result;
}

ForwardResult solve_forward(const SWEState& ic, const BottomTopography& bottom,
                            const ControlSignal& p, const SolverConfig& cfg,
                            bool store_trajectory) {
  return solve_forward(ic, bottom, SampledControl(p), cfg, store_trajectory);
}

ForwardResult solve_forward(const SWEState& ic, const BottomTopography& bottom,
                            const std::function<Scalar(Scalar)>& p,
                            const SolverConfig& cfg, bool store_trajectory) {
  return solve_forward(ic, bottom, AnalyticControl(p), cfg, store_trajectory);
}

SWEState project_initial_conditions(const std::function<Scalar(Scalar)>& h0,
                                    const std::function<Scalar(Scalar)>& hu0,
                                    Scalar x0, Scalar xL, const SolverConfig& cfg) {
  Mesh1D mesh{x0, xL, cfg.n_cells, true};
  SWEState state(mesh, cfg.degree);
  const QuadratureRule quad = gauss_legendre(cfg.degree + 2);
  state.h = project(h0, mesh, cfg.degree, quad);
  state.hu = project(hu0, mesh, cfg.degree, quad);
  return state;
}

}  // namespace riverdg
