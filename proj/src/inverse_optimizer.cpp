#include "riverdg/inverse_optimizer.hpp"

#include <cmath>

namespace riverdg {

ControlSignal prox_l1(const ControlSignal& w, Scalar threshold, Scalar p0) {
  ControlSignal out = w;
  for (Index i = 0; i < w.values.size(); ++i) {
    const Scalar d = w.values[i] - p0;
    const Scalar mag = std::abs(d) - threshold;
    out.values[i] = (mag > 0.0 ? (d > 0.0 ? mag : -mag) : 0.0) + p0;
  }
  return out;
}

namespace {

// Tridiagonal system (M + coeff K): lumped trapezoid mass and the Neumann
// stiffness matrix of the control grid.
void h1_system(const Vec& times, Scalar coeff, Vec& lower, Vec& diag, Vec& upper,
               Vec& mass) {
  const Index n = times.size();
  lower = Vec::Zero(n);
  upper = Vec::Zero(n);
  diag = Vec::Zero(n);
  mass = Vec::Zero(n);
  for (Index i = 0; i + 1 < n; ++i) {
    const Scalar h = times[i + 1] - times[i];
    mass[i] += 0.5 * h;
    mass[i + 1] += 0.5 * h;
    diag[i] += coeff / h;
    diag[i + 1] += coeff / h;
    upper[i] -= coeff / h;
    lower[i + 1] -= coeff / h;
  }
  diag += mass;
}

}  // namespace

ControlSignal prox_h1(const ControlSignal& w, Scalar coeff) {
  if (coeff <= 0.0) return w;
  const Index n = w.times.size();
  Vec lower, diag, upper, mass;
  h1_system(w.times, coeff, lower, diag, upper, mass);
  // Thomas algorithm on (M + coeff K) x = M w
  Vec rhs = mass.array() * w.values.array();
  Vec c_prime(n), d_prime(n);
  c_prime[0] = upper[0] / diag[0];
  d_prime[0] = rhs[0] / diag[0];
  for (Index i = 1; i < n; ++i) {
    const Scalar denom = diag[i] - lower[i] * c_prime[i - 1];
    c_prime[i] = (i + 1 < n) ? upper[i] / denom : 0.0;
    d_prime[i] = (rhs[i] - lower[i] * d_prime[i - 1]) / denom;
  }
  ControlSignal out = w;
  out.values[n - 1] = d_prime[n - 1];
  for (Index i = n - 2; i >= 0; --i)
    out.values[i] = d_prime[i] - c_prime[i] * out.values[i + 1];
  return out;
}

Vec h1_operator_apply(const ControlSignal& w, Scalar coeff) {
  const Index n = w.times.size();
  Vec lower, diag, upper, mass;
  h1_system(w.times, coeff, lower, diag, upper, mass);
  Vec out(n);
  for (Index i = 0; i < n; ++i) {
    Scalar acc = diag[i] * w.values[i];
    if (i > 0) acc += lower[i] * w.values[i - 1];
    if (i + 1 < n) acc += upper[i] * w.values[i + 1];
    out[i] = acc / mass[i];  // (I - coeff Laplacian) w = M^{-1} (M + coeff K) w
  }
  return out;
}

void splitting_step(OptimizerState& state, const GradientSignal& grad,
                    const RegularizationParams& reg) {
  const Scalar lr = state.learning_rate;
  ControlSignal kappa = state.p;
  kappa.values = 2.0 * state.p.values - state.z.values - lr * grad.values;
  const ControlSignal omega = prox_h1(kappa, lr * reg.gamma_hat * reg.gamma_h);
  state.z.values += state.relaxation * (omega.values - state.p.values);
  state.p = prox_l1(state.z, lr * reg.gamma_hat * reg.gamma_l, reg.p_background);
  ++state.iteration;
}

CostRecord cost_record(const ControlSignal& p, Scalar j0,
                       const RegularizationParams& reg) {
  CostRecord rec;
  rec.j0 = j0;
  const Vec w = trapezoid_weights(p.times);
  rec.r_l1 = (w.array() * (p.values.array() - reg.p_background).abs()).sum();
  Scalar h1 = 0.0;
  for (Index i = 0; i + 1 < p.times.size(); ++i) {
    const Scalar dt = p.times[i + 1] - p.times[i];
    const Scalar dp = p.values[i + 1] - p.values[i];
    h1 += dp * dp / dt;
  }
  rec.r_h1 = h1;
  rec.total = j0 + reg.gamma_hat * (reg.gamma_l * rec.r_l1 + reg.gamma_h * rec.r_h1);
  return rec;
}

InversionResult run_inversion(const InversionSetup& setup, Index snapshot_every) {
  const CaseSpec& cs = setup.cs;
  SolverConfig fwd_cfg = setup.forward_cfg;
  fwd_cfg.final_time = cs.final_time;
  if (cs.discontinuous && fwd_cfg.limiter.kind == LimiterKind::none)
    fwd_cfg.limiter = LimiterSpec::weno();
  const SWEState ic = cs.initial_state(fwd_cfg);

  OptimizerState state;
  state.p = setup.p_initial;
  state.z = setup.p_initial;
  state.learning_rate = setup.learning_rate;
  state.relaxation = setup.relaxation;
  state.best.j0 = std::numeric_limits<Scalar>::infinity();

  InversionResult result;
  result.history.reserve(setup.n_iters);

  for (Index k = 0; k < setup.n_iters; ++k) {
    ForwardResult fwd;
    try {
      fwd = solve_forward(ic, cs.bottom, SampledControl(state.p), fwd_cfg, true);
    } catch (const NumericalError& err) {
      throw NumericalError("iteration " + std::to_string(k) + ": " + err.what());
    }
    const BoundaryTrace measured_here = resample_trace(setup.measured, fwd.trace.times);
    const MisfitTrace misfit = misfit_trace(fwd.trace, measured_here);
    const Scalar j0 = misfit_j0(misfit);
    result.history.push_back(cost_record(state.p, j0, setup.reg));
    if (j0 < state.best.j0) state.best = BestIterate{k, j0, state.p};
    if (snapshot_every > 0 && k % snapshot_every == 0)
      result.snapshots.emplace_back(k, state.p);

    AdjointProblem adj;
    adj.forward = &fwd.trajectory;
    adj.trace = &fwd.trace;
    adj.misfit = &misfit;
    adj.bottom = cs.bottom;
    SampledControl control(state.p);
    adj.control = &control;
    adj.gravity = fwd_cfg.gravity;
    AdjointTrajectory sigma;
    try {
      sigma = solve_adjoint(adj, setup.adjoint_cfg);
    } catch (const NumericalError& err) {
      throw NumericalError("iteration " + std::to_string(k) + " (adjoint): " +
                           err.what());
    }
    const GradientSignal grad = gradient_j0(sigma, fwd.trajectory, cs.bottom,
                                            fwd_cfg.gravity, state.p.times);
    splitting_step(state, grad, setup.reg);
  }

  result.best = state.best;
  return result;
}

}  // namespace riverdg
