#include "riverdg/measurement.hpp"

#include <cmath>

namespace riverdg {

namespace {

Scalar splitmix64_scalar(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z = z ^ (z >> 31);
  return static_cast<Scalar>(z);
}

constexpr Scalar kPi = 3.14159265358979323846;

BottomTopography standard_bottom() {
  BottomTopography b;
  b.b0 = [](Scalar x) { return std::cos(std::sin(2.0 * kPi * x)); };
  b.b1 = [](Scalar x) { const Scalar s = std::sin(kPi * x); return s * s; };
  b.db0 = [](Scalar x) {
    return -std::sin(std::sin(2.0 * kPi * x)) * 2.0 * kPi * std::cos(2.0 * kPi * x);
  };
  b.db1 = [](Scalar x) { return kPi * std::sin(2.0 * kPi * x); };
  return b;
}

std::function<Scalar(Scalar)> gaussian_bump(Scalar beta, Scalar center) {
  return [beta, center](Scalar t) {
    const Scalar d = t - center;
    return std::exp(beta * d * d);
  };
}

}  // namespace

std::uint64_t substream(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed ^ (salt * 0xD1B54A32D192ED03ull);
  (void)splitmix64_scalar(x);  // advance once so salts decorrelate
  return x;
}

std::vector<std::string> case_ids() {
  return {"a", "b", "c", "d", "e", "f", "3a", "3b", "3c", "3d", "4a", "4b",
          "5a", "5b", "5c"};
}

CaseSpec get_case(const std::string& id) {
  CaseSpec cs;
  cs.id = id;
  cs.h0 = [](Scalar x) { return 7.0 + std::exp(std::sin(2.0 * kPi * x)); };
  cs.hu0 = [](Scalar x) { return std::cos(2.0 * kPi * x); };
  cs.bottom = standard_bottom();
  cs.final_time = 0.05;
  cs.learning_rate = 0.6;
  cs.gamma_l = 1e-6;
  cs.gamma_h = 5e-8;

  const Scalar beta = -10000.0;
  const Scalar T = cs.final_time;
  auto sum2 = [](std::function<Scalar(Scalar)> f, std::function<Scalar(Scalar)> g,
                 Scalar cf, Scalar cg, Scalar shift) {
    return [f = std::move(f), g = std::move(g), cf, cg, shift](Scalar t) {
      return cf * f(t) + cg * g(t) + shift;
    };
  };
  const auto oscillatory = [T](Scalar t) {
    const Scalar c = std::cos(10.0 * kPi * t / T);
    return 3.0 * c * c + 0.75;
  };

  if (id == "a") {
    cs.p_true = sum2(gaussian_bump(beta, T / 3.0), gaussian_bump(beta, T / 3.0), 1.0, 0.0, 1.0);
    cs.p_initial = sum2(gaussian_bump(beta, 2.0 * T / 3.0), gaussian_bump(beta, T / 3.0), 1.0, 0.0, 1.0);
  } else if (id == "b") {
    cs.p_true = sum2(gaussian_bump(beta, 2.0 * T / 3.0), gaussian_bump(beta, T / 3.0), 1.0, 0.0, 1.0);
    cs.p_initial = sum2(gaussian_bump(beta, T / 3.0), gaussian_bump(beta, T / 3.0), 1.0, 0.0, 1.0);
  } else if (id == "c") {
    cs.p_true = sum2(gaussian_bump(2.0 * beta, T / 4.0), gaussian_bump(2.0 * beta, 3.0 * T / 4.0), 1.0, 1.0, 1.0);
    cs.p_initial = sum2(gaussian_bump(beta, T / 2.0), gaussian_bump(beta, T / 2.0), 1.5, 0.0, 1.0);
    cs.gamma_h = 1e-8;
  } else if (id == "d" || id == "3d" || id == "5a" || id == "5b" || id == "5c") {
    cs.p_true = sum2(gaussian_bump(beta, 0.3 * T), gaussian_bump(2.0 * beta, 0.7 * T), 1.0, 1.5, 1.0);
    cs.p_initial = oscillatory;
    if (id == "3d") cs.gamma_h = 1e-8;
    if (id == "5a") { cs.gamma_l = 0.0; cs.gamma_h = 5e-8; }
    if (id == "5b") { cs.gamma_l = 1e-6; cs.gamma_h = 0.0; }
    if (id == "5c") { cs.gamma_l = 0.0; cs.gamma_h = 0.0; }
  } else if (id == "e") {
    cs.p_true = sum2(gaussian_bump(beta, 0.3 * T), gaussian_bump(2.0 * beta, 0.7 * T), 1.5, 1.0, 1.0);
    cs.p_initial = oscillatory;
  } else if (id == "f") {
    auto third = gaussian_bump(4.0 * beta, 3.0 * T / 4.0);
    cs.p_true = [a = gaussian_bump(4.0 * beta, T / 4.0), b = gaussian_bump(4.0 * beta, T / 2.0),
                 third](Scalar t) { return a(t) + 1.5 * b(t) - 0.5 * third(t) + 1.0; };
    cs.p_initial = oscillatory;
    cs.gamma_h = 5e-9;
  } else if (id == "3a" || id == "3b" || id == "3c") {
    cs.p_true = sum2(gaussian_bump(beta, 0.3 * T), gaussian_bump(2.0 * beta, 0.7 * T), 1.0, 1.5, 1.0);
    cs.gamma_h = 1e-8;
    if (id == "3a") cs.p_initial = [](Scalar) { return 1.0; };
    if (id == "3b")
      cs.p_initial = [T](Scalar t) { const Scalar s = std::sin(kPi * t / T); return 4.0 * s * s; };
    if (id == "3c")
      cs.p_initial = [T](Scalar t) { const Scalar s = std::sin(kPi * t / T); return -2.0 * s * s + 2.0; };
  } else if (id == "4a" || id == "4b") {
    cs.final_time = 0.2;
    cs.discontinuous = true;
    cs.learning_rate = 0.02;
    cs.gamma_l = 1e-4;
    cs.gamma_h = 1e-6;
    const Scalar beta4 = -700.0;
    const Scalar T4 = cs.final_time;
    if (id == "4a") {
      cs.p_true = sum2(gaussian_bump(beta4, T4 / 2.0), gaussian_bump(beta4, T4 / 2.0), 1.0, 0.0, 1.0);
    } else {
      auto third = gaussian_bump(4.0 * beta4, 3.0 * T4 / 4.0);
      cs.p_true = [a = gaussian_bump(4.0 * beta4, T4 / 4.0),
                   b = gaussian_bump(4.0 * beta4, T4 / 2.0), third](Scalar t) {
        return a(t) + 1.5 * b(t) - 0.5 * third(t) + 1.0;
      };
    }
    cs.p_initial = [](Scalar) { return 1.0; };
  } else {
    throw DimensionError("unknown case id: " + id);
  }
  return cs;
}

BoundaryTrace generate_measured_data(const CaseSpec& cs, const SolverConfig& fine_cfg,
                                     const NoiseSpec& noise) {
  SolverConfig cfg = fine_cfg;
  cfg.final_time = cs.final_time;
  cfg.limiter = cs.discontinuous ? LimiterSpec::minmod() : LimiterSpec::none();
  const SWEState ic = cs.initial_state(cfg);
  ForwardResult result =
      solve_forward(ic, cs.bottom, AnalyticControl(cs.p_true), cfg, false);
  BoundaryTrace trace = std::move(result.trace);
  if (noise.eta_meas > 0.0) {
    UniformStream stream(substream(noise.seed, 1));
    for (Index i = 0; i < trace.values.rows(); ++i)
      for (Index c = 0; c < 4; ++c)
        trace.values(i, c) *= stream.noise_factor(noise.eta_meas);
  }
  return trace;
}

ControlSignal noisy_initial_guess(const std::function<Scalar(Scalar)>& p_initial,
                                  const Vec& grid, const NoiseSpec& noise) {
  ControlSignal signal = ControlSignal::sample(p_initial, grid);
  if (noise.eta_p > 0.0) {
    UniformStream stream(substream(noise.seed, 2));
    for (Index i = 0; i < signal.values.size(); ++i)
      signal.values[i] *= stream.noise_factor(noise.eta_p);
  }
  return signal;
}

BoundaryTrace resample_trace(const BoundaryTrace& trace, const Vec& target_grid) {
  const Index n = trace.size();
  const Scalar t0 = trace.times[0], t1 = trace.times[n - 1];
  const Scalar tol = 1e-9 * std::max(t1 - t0, Scalar(1e-30));
  BoundaryTrace out;
  out.times = target_grid;
  out.values.resize(target_grid.size(), 4);
  Index lo = 0;
  for (Index i = 0; i < target_grid.size(); ++i) {
    const Scalar t = target_grid[i];
    if (t < t0 - tol || t > t1 + tol)
      throw InterpolationRangeError("resample_trace: target outside source span");
    if (t <= t0) {
      out.values.row(i) = trace.values.row(0);
      continue;
    }
    if (t >= t1) {
      out.values.row(i) = trace.values.row(n - 1);
      continue;
    }
    if (t < trace.times[lo]) lo = 0;  // non-monotone target: restart the march
    while (lo + 1 < n && trace.times[lo + 1] <= t) ++lo;
    const Index hi = lo + 1;
    const Scalar w = (t - trace.times[lo]) / (trace.times[hi] - trace.times[lo]);
    out.values.row(i) = (1.0 - w) * trace.values.row(lo) + w * trace.values.row(hi);
  }
  return out;
}

}  // namespace riverdg
