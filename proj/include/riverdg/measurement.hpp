#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "riverdg/forward_dg.hpp"

namespace riverdg {

/// Multiplicative-noise parameters.  Factors are drawn from
/// U[1 - eta/2, 1 + eta/2]; eta_meas scales the measured trace, eta_p the
/// initial guess for p.
struct NoiseSpec {
  Scalar eta_meas = 0.1;
  Scalar eta_p = 0.25;
  std::uint64_t seed = 0;
};

/// Uniform stream with a portable mantissa mapping so that seeded runs are
/// bit-identical across standard library implementations.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform draw in [0, 1).
  Scalar next() {
    return static_cast<Scalar>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Multiplicative factor in [1 - eta/2, 1 + eta/2].
  Scalar noise_factor(Scalar eta) { return 1.0 - 0.5 * eta + eta * next(); }

 private:
  std::mt19937_64 engine_;
};

/// Stream-splitting convention: every consumer derives its own seed from the
/// experiment seed and a fixed salt, so streams never alias.
/// Salts: 1 = measurement noise, 2 = initial-guess noise, 3 = test directions.
std::uint64_t substream(std::uint64_t seed, std::uint64_t salt);

/// Full description of one experiment case: initial conditions, bottom
/// profiles, true/initial time components, final time, and the shipped
/// hyperparameters.
struct CaseSpec {
  std::string id;
  Scalar x0 = 0.0;
  Scalar xL = 1.0;
  std::function<Scalar(Scalar)> h0;
  std::function<Scalar(Scalar)> hu0;
  BottomTopography bottom;
  std::function<Scalar(Scalar)> p_true;
  std::function<Scalar(Scalar)> p_initial;
  Scalar final_time = 0.05;
  bool discontinuous = false;  // requires limiting (minmod data / WENO loop)

  // shipped defaults
  Scalar learning_rate = 0.6;
  Scalar gamma_l = 1e-6;
  Scalar gamma_h = 5e-8;

  SWEState initial_state(const SolverConfig& cfg) const {
    return project_initial_conditions(h0, hu0, x0, xL, cfg);
  }
};

/// Registered case ids: a-f, 3a-3d, 4a-4b, 5a-5c.
std::vector<std::string> case_ids();
CaseSpec get_case(const std::string& id);

/// Run the fine solver with the true control and multiply every trace entry
/// by an independent uniform draw (row-major order: time level, then
/// column).  Deterministic under the seed.  Discontinuous cases use the
/// minmod limiter, matching the data-generation side of the scheme.
BoundaryTrace generate_measured_data(const CaseSpec& cs, const SolverConfig& fine_cfg,
                                     const NoiseSpec& noise);

/// Sample p_initial on the control grid and apply pointwise multiplicative
/// noise (salt-2 stream).
ControlSignal noisy_initial_guess(const std::function<Scalar(Scalar)>& p_initial,
                                  const Vec& grid, const NoiseSpec& noise);

/// Componentwise linear interpolation of a trace onto a new time grid.
BoundaryTrace resample_trace(const BoundaryTrace& trace, const Vec& target_grid);

}  // namespace riverdg
