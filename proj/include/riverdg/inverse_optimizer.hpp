#pragma once

#include <vector>

#include "riverdg/measurement.hpp"
#include "riverdg/objective_gradient.hpp"

namespace riverdg {

/// Regularization weights for J(p) = J0(p) + gamma_hat (gamma_l R_L1 +
/// gamma_h R_H1), plus the homogeneous background p0 of the L1 term.
struct RegularizationParams {
  Scalar gamma_l = 1e-6;
  Scalar gamma_h = 5e-8;
  Scalar p_background = 1.0;
  Scalar gamma_hat = 1.0;
};

struct BestIterate {
  Index iteration = -1;
  Scalar j0 = 0.0;
  ControlSignal p;
};

/// Splitting iteration state: the iterate p, the auxiliary variable z, and
/// the running best (smallest misfit) iterate.
struct OptimizerState {
  ControlSignal p;
  ControlSignal z;
  Scalar learning_rate = 0.6;
  Scalar relaxation = 1.0;
  Index iteration = 0;
  BestIterate best;
};

/// Shifted soft-thresholding toward the background value:
/// sign(w - p0) max(|w - p0| - threshold, 0) + p0, pointwise.
ControlSignal prox_l1(const ControlSignal& w, Scalar threshold, Scalar p0);

/// H1 resolvent: solves (I - coeff Laplacian) out = w on the control grid
/// with homogeneous Neumann ends, via the symmetric tridiagonal system
/// (M + coeff K) out = M w (lumped mass M, stiffness K).  On a uniform grid
/// this is the classic second-difference operator with one-sided reflection
/// at the ends.  Direct Thomas solve.
ControlSignal prox_h1(const ControlSignal& w, Scalar coeff);

/// Apply (I - coeff Laplacian) to a signal; used to verify the resolvent.
Vec h1_operator_apply(const ControlSignal& w, Scalar coeff);

/// One three-operator splitting update:
///   kappa = 2 p - z - lr grad,  omega = prox_h1(kappa),
///   z <- z + relaxation (omega - p),  p <- prox_l1(z).
/// The prox thresholds are lr gamma_hat gamma_l and lr gamma_hat gamma_h.
void splitting_step(OptimizerState& state, const GradientSignal& grad,
                    const RegularizationParams& reg);

/// Raw regularizer magnitudes of an iterate: r_l1 = int |p - p0| dt and
/// r_h1 = int |p'|^2 dt (trapezoid / first differences).
CostRecord cost_record(const ControlSignal& p, Scalar j0,
                       const RegularizationParams& reg);

/// Everything one inversion needs.  The control grid is the measured trace's
/// time grid; the forward solver interpolates p linearly between samples.
struct InversionSetup {
  CaseSpec cs;
  SolverConfig forward_cfg;
  SolverConfig adjoint_cfg;
  BoundaryTrace measured;   ///< noisy data on the control grid
  ControlSignal p_initial;  ///< (noisy) starting control
  RegularizationParams reg;
  Scalar learning_rate = 0.6;
  Scalar relaxation = 1.0;
  Index n_iters = 1000;
};

struct InversionResult {
  BestIterate best;
  std::vector<CostRecord> history;
  std::vector<std::pair<Index, ControlSignal>> snapshots;
};

/// Algorithm loop: per iteration one forward solve at p^k, the misfit and
/// its J0, one adjoint solve, the gradient on the control grid, and one
/// splitting update.  The iterate with smallest J0 is returned together
/// with the full cost history.  Deterministic for fixed inputs.
InversionResult run_inversion(const InversionSetup& setup, Index snapshot_every = 0);

}  // namespace riverdg
