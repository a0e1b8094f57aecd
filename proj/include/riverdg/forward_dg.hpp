#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "riverdg/mesh_basis.hpp"

namespace riverdg {

/// Water height and discharge at one time level, as modal DG fields on a
/// shared mesh.
struct SWEState {
  PiecewiseField h;
  PiecewiseField hu;

  SWEState() = default;
  SWEState(const Mesh1D& mesh, Index degree) : h(mesh, degree), hu(mesh, degree) {}
};

/// a*x + b*y componentwise on the modal coefficients.
SWEState lincomb(Scalar a, const SWEState& x, Scalar b, const SWEState& y);

/// Spatial bottom profiles b0, b1 and their analytic x-derivatives.  The
/// moving bed is b(x,t) = b0(x) + p(t) b1(x); only the slope enters the
/// momentum source.
struct BottomTopography {
  std::function<Scalar(Scalar)> b0;
  std::function<Scalar(Scalar)> b1;
  std::function<Scalar(Scalar)> db0;
  std::function<Scalar(Scalar)> db1;
};

/// p(t) sampled on a strictly increasing time grid; evaluation is piecewise
/// linear between samples.
struct ControlSignal {
  Vec times;
  Vec values;

  Index size() const { return times.size(); }
  Scalar t_begin() const { return times[0]; }
  Scalar t_end() const { return times[times.size() - 1]; }

  /// Linear interpolation; tolerates roundoff-level excursions past the ends.
  Scalar eval(Scalar t) const;

  /// Index of the grid point matching t, or -1.
  Index grid_index(Scalar t) const;

  static ControlSignal sample(const std::function<Scalar(Scalar)>& f, const Vec& grid);
};

/// Time evaluator for p(t) as seen by the RK stepper.  Sampled controls use
/// the aligned three-point quadratic rule for the half-stage time.
class ControlEvaluator {
 public:
  virtual ~ControlEvaluator() = default;
  virtual Scalar at(Scalar t) const = 0;
  /// Value at t_n + dt/2.  t_prev is the previous accepted step time
  /// (NaN at the first step).
  virtual Scalar at_half_stage(Scalar t_prev, Scalar t_n, Scalar t_next) const {
    (void)t_prev;
    return at(0.5 * (t_n + t_next));
  }
};

class AnalyticControl final : public ControlEvaluator {
 public:
  explicit AnalyticControl(std::function<Scalar(Scalar)> f) : f_(std::move(f)) {}
  Scalar at(Scalar t) const override { return f_(t); }

 private:
  std::function<Scalar(Scalar)> f_;
};

/// Sampled control.  When the requested stage times coincide with grid
/// samples the half-stage value is the quadratic interpolant through
/// (t_prev, t_n, t_next); at the first step it falls back to the linear
/// midpoint; off-grid times use plain linear interpolation.
class SampledControl final : public ControlEvaluator {
 public:
  explicit SampledControl(const ControlSignal& signal) : signal_(&signal) {}
  Scalar at(Scalar t) const override { return signal_->eval(t); }
  Scalar at_half_stage(Scalar t_prev, Scalar t_n, Scalar t_next) const override;

 private:
  const ControlSignal* signal_;
};

enum class LimiterKind { none, minmod_tvb, weno };

struct LimiterSpec {
  LimiterKind kind = LimiterKind::none;
  Scalar tvb_m = 50.0;

  static LimiterSpec none() { return {LimiterKind::none, 50.0}; }
  static LimiterSpec minmod(Scalar m = 50.0) { return {LimiterKind::minmod_tvb, m}; }
  static LimiterSpec weno(Scalar m = 50.0) { return {LimiterKind::weno, m}; }
};

struct SolverConfig {
  Scalar gravity = 9.812;
  Scalar cfl = 0.0;  // <= 0 selects the default 0.18 / (2k+1)
  Index degree = 2;
  Index n_cells = 50;
  Scalar final_time = 0.05;
  LimiterSpec limiter;
  /// Optional fixed step schedule (ascending, starts at 0, ends at
  /// final_time).  Empty means adaptive CFL stepping.
  std::vector<Scalar> scheduled_times;

  Scalar effective_cfl() const {
    return cfl > 0.0 ? cfl : 0.18 / (2.0 * static_cast<Scalar>(degree) + 1.0);
  }
};

/// Forward solution history at the accepted step levels; the adjoint solve
/// interpolates linearly in time between levels.
struct Trajectory {
  std::vector<Scalar> times;
  std::vector<SWEState> states;

  Scalar t_begin() const { return times.front(); }
  Scalar t_end() const { return times.back(); }
  SWEState interpolate(Scalar t) const;
};

/// (h, hu) at both domain endpoints for every recorded step time.
/// Columns: h(x0), hu(x0), h(xL), hu(xL).
struct BoundaryTrace {
  Vec times;
  Mat values;

  Index size() const { return times.size(); }
  Vec2 left(Index i) const { return Vec2(values(i, 0), values(i, 1)); }
  Vec2 right(Index i) const { return Vec2(values(i, 2), values(i, 3)); }
};

struct ForwardResult {
  Trajectory trajectory;
  BoundaryTrace trace;
};

/// SWE flux F(U) = (hu, hu^2/h + g h^2/2).
Vec2 physical_flux(Scalar h, Scalar hu, Scalar g);

/// Lax-Friedrichs flux 0.5 (F(uL) + F(uR) - alpha (uR - uL)).
Vec2 lax_friedrichs_flux(const Vec2& uL, const Vec2& uR, Scalar alpha, Scalar g);

/// Precomputed basis/quadrature tables for the DG spatial operator on one
/// (mesh, degree) pair.  The quadrature is Gauss-Legendre with degree+2
/// points (exact to degree 2k+3).
class ForwardDGOperator {
 public:
  ForwardDGOperator(const Mesh1D& mesh, Index degree);

  const Mesh1D& mesh() const { return mesh_; }
  Index degree() const { return degree_; }
  const QuadratureRule& quad() const { return quad_; }

  /// max(|u| + sqrt(g h)) over all quadrature nodes and cell traces.
  Scalar max_wavespeed(const SWEState& state, Scalar g) const;

  /// Semi-discrete DG residual d/dt of the modal coefficients: volume flux
  /// term, periodic Lax-Friedrichs interface fluxes and the -g h B momentum
  /// source, with the (diagonal) mass matrix already inverted.
  SWEState rhs(const SWEState& state, const PiecewiseField& bottom_B, Scalar g,
               Scalar time_for_errors = 0.0) const;

 private:
  Mesh1D mesh_;
  Index degree_;
  QuadratureRule quad_;
  Mat phi_;        // q x modes
  Mat dphi_;       // q x modes
  Vec phi_right_;  // basis at xi = +1
  Vec phi_left_;   // basis at xi = -1
};

Scalar max_wavespeed(const SWEState& state, Scalar g);
SWEState semi_discrete_rhs(const SWEState& state, const PiecewiseField& bottom_B,
                           Scalar g);

/// Characteristic-wise TVB minmod or WENO limiting; identity at degree 0 and
/// for LimiterKind::none.  Cell averages are never modified.
SWEState apply_limiter(const SWEState& state, const LimiterSpec& spec, Scalar g);

/// One SSP-RK3 step of size dt starting at time t.  The bottom slope is
/// rebuilt at the stage times t, t+dt, t+dt/2 as db0 + p(stage) db1 projected
/// on the solver mesh; t_prev feeds the half-stage control interpolation.
SWEState ssp_rk3_step(const SWEState& state, Scalar t, Scalar dt,
                      const BottomTopography& bottom, const ControlSignal& p,
                      const SolverConfig& cfg,
                      Scalar t_prev = std::numeric_limits<Scalar>::quiet_NaN());

/// Integrate 0 -> final_time with dt = cfl dx / alpha recomputed every step
/// (final step clipped), recording each accepted level and the boundary
/// traces.  Periodic mesh required.
ForwardResult solve_forward(const SWEState& ic, const BottomTopography& bottom,
                            const ControlEvaluator& p, const SolverConfig& cfg,
                            bool store_trajectory = true);

ForwardResult solve_forward(const SWEState& ic, const BottomTopography& bottom,
                            const ControlSignal& p, const SolverConfig& cfg,
                            bool store_trajectory = true);

ForwardResult solve_forward(const SWEState& ic, const BottomTopography& bottom,
                            const std::function<Scalar(Scalar)>& p,
                            const SolverConfig& cfg, bool store_trajectory = true);

/// Project analytic initial conditions on the mesh implied by cfg.
SWEState project_initial_conditions(const std::function<Scalar(Scalar)>& h0,
                                    const std::function<Scalar(Scalar)>& hu0,
                                    Scalar x0, Scalar xL, const SolverConfig& cfg);

}  // namespace riverdg
