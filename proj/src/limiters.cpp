#include <cmath>

#include "riverdg/forward_dg.hpp"

namespace riverdg {

namespace {

// Roe-type eigenvector matrices of the SWE Jacobian at a cell-average state.
void characteristic_matrices(Scalar h, Scalar hu, Scalar g, Mat2& right, Mat2& left) {
  const Scalar u = hu / h;
  const Scalar c = std::sqrt(g * h);
  right << 1.0, 1.0, u - c, u + c;
  left << (u + c) / (2.0 * c), -1.0 / (2.0 * c), -(u - c) / (2.0 * c), 1.0 / (2.0 * c);
}

Scalar minmod3(Scalar a, Scalar b, Scalar c) {
  if (a > 0.0 && b > 0.0 && c > 0.0) return std::min(a, std::min(b, c));
  if (a < 0.0 && b < 0.0 && c < 0.0) return std::max(a, std::max(b, c));
  return 0.0;
}

// TVB-corrected minmod: small deviations pass through untouched.
Scalar tvb_minmod(Scalar a, Scalar b, Scalar c, Scalar m_dx2) {
  if (std::abs(a) <= m_dx2) return a;
  return minmod3(a, b, c);
}

struct CellStencil {
  Vec2 avg, avg_l, avg_r;  // cell averages: this cell, left, right neighbor
  Vec2 dev_r;              // U(+1) - avg
  Vec2 dev_l;              // avg - U(-1)
};

CellStencil gather(const SWEState& s, Index j) {
  const Index n = s.h.mesh.n_cells;
  const Index jl = (j == 0) ? n - 1 : j - 1;
  const Index jr = (j + 1 == n) ? 0 : j + 1;
  CellStencil st;
  st.avg = Vec2(s.h.cell_average(j), s.hu.cell_average(j));
  st.avg_l = Vec2(s.h.cell_average(jl), s.hu.cell_average(jl));
  st.avg_r = Vec2(s.h.cell_average(jr), s.hu.cell_average(jr));
  st.dev_r = Vec2(evaluate(s.h, j, 1.0), evaluate(s.hu, j, 1.0)) - st.avg;
  st.dev_l = st.avg - Vec2(evaluate(s.h, j, -1.0), evaluate(s.hu, j, -1.0));
  return st;
}

// Characteristic-wise TVB check; returns true when the cell needs limiting
// and fills the limited right-edge deviation (in conservative variables).
bool tvb_flag(const CellStencil& st, Scalar g, Scalar m_dx2, Vec2* limited_dev) {
  Mat2 right, left;
  characteristic_matrices(st.avg[0], st.avg[1], g, right, left);
  const Vec2 w_r = left * st.dev_r;
  const Vec2 w_l = left * st.dev_l;
  const Vec2 d_m = left * Vec2(st.avg - st.avg_l);
  const Vec2 d_p = left * Vec2(st.avg_r - st.avg);
  Vec2 lim_r, lim_l;
  for (int c = 0; c < 2; ++c) {
    lim_r[c] = tvb_minmod(w_r[c], d_m[c], d_p[c], m_dx2);
    lim_l[c] = tvb_minmod(w_l[c], d_m[c], d_p[c], m_dx2);
  }
  const bool troubled = lim_r[0] != w_r[0] || lim_r[1] != w_r[1] ||
                        lim_l[0] != w_l[0] || lim_l[1] != w_l[1];
  if (troubled && limited_dev) *limited_dev = right * lim_r;
  return troubled;
}

SWEState apply_minmod(const SWEState& state, Scalar tvb_m, Scalar g) {
  const Mesh1D& mesh = state.h.mesh;
  const Scalar m_dx2 = tvb_m * mesh.dx() * mesh.dx();
  const Scalar sqrt3 = std::sqrt(3.0);
  SWEState out = state;
  for (Index j = 0; j < mesh.n_cells; ++j) {
    const CellStencil st = gather(state, j);
    Vec2 dev;
    if (!tvb_flag(st, g, m_dx2, &dev)) continue;
    // Troubled: keep the average, set the linear mode from the limited
    // right-edge deviation, drop everything above it.
    out.h.coeffs.row(j).setZero();
    out.hu.coeffs.row(j).setZero();
    out.h.coeffs(j, 0) = st.avg[0];
    out.hu.coeffs(j, 0) = st.avg[1];
    if (state.h.degree >= 1) {
      out.h.coeffs(j, 1) = dev[0] / sqrt3;
      out.hu.coeffs(j, 1) = dev[1] / sqrt3;
    }
  }
  return out;
}

// Re-express the polynomial of a neighbor cell in the frame of the target
// cell (reference shift of +-2 on a uniform mesh) by quadrature projection.
Vec shift_polynomial(const Vec& coeffs, Scalar shift, const QuadratureRule& quad,
                     Index degree) {
  Vec out = Vec::Zero(degree + 1);
  for (Index q = 0; q < quad.size(); ++q) {
    const Scalar value = coeffs.dot(basis_values(degree, quad.nodes[q] + shift));
    out += 0.5 * quad.weights[q] * value * basis_values(degree, quad.nodes[q]);
  }
  return out;
}

// Qiu-Shu style smoothness indicator in reference coordinates.  On a uniform
// mesh sum_l dx^{2l-1} int (d^l p/dx^l)^2 dx reduces to
// sum_l 2^{2l-1} int_{-1}^{1} (d^l p/dxi^l)^2 dxi.
Scalar smoothness(const Vec& coeffs, const QuadratureRule& quad, Index degree) {
  Scalar beta = 0.0;
  for (Index l = 1; l <= degree; ++l) {
    Scalar acc = 0.0;
    for (Index q = 0; q < quad.size(); ++q) {
      const Scalar d = coeffs.dot(basis_derivatives(degree, quad.nodes[q], l));
      acc += quad.weights[q] * d * d;
    }
    beta += std::pow(2.0, 2.0 * static_cast<Scalar>(l) - 1.0) * acc;
  }
  return beta;
}

SWEState apply_weno(const SWEState& state, Scalar tvb_m, Scalar g) {
  const Mesh1D& mesh = state.h.mesh;
  const Index degree = state.h.degree;
  const Scalar m_dx2 = tvb_m * mesh.dx() * mesh.dx();
  const QuadratureRule quad = gauss_legendre(degree + 2);
  const Scalar gamma[3] = {0.001, 0.998, 0.001};
  constexpr Scalar eps = 1e-6;

  SWEState out = state;
  for (Index j = 0; j < mesh.n_cells; ++j) {
    const CellStencil st = gather(state, j);
    if (!tvb_flag(st, g, m_dx2, nullptr)) continue;
    const Index n = mesh.n_cells;
    const Index jl = (j == 0) ? n - 1 : j - 1;
    const Index jr = (j + 1 == n) ? 0 : j + 1;
    const PiecewiseField* fields[2] = {&state.h, &state.hu};
    PiecewiseField* outputs[2] = {&out.h, &out.hu};
    for (int v = 0; v < 2; ++v) {
      // candidates: left neighbor, own cell, right neighbor, each shifted to
      // this cell's frame and recentered to the troubled cell's average
      Vec cand[3];
      cand[0] = shift_polynomial(fields[v]->coeffs.row(jl).transpose(), 2.0, quad, degree);
      cand[1] = fields[v]->coeffs.row(j).transpose();
      cand[2] = shift_polynomial(fields[v]->coeffs.row(jr).transpose(), -2.0, quad, degree);
      const Scalar avg = fields[v]->cell_average(j);
      Scalar wsum = 0.0, w[3];
      for (int i = 0; i < 3; ++i) {
        cand[i][0] = avg;
        const Scalar beta = smoothness(cand[i], quad, degree);
        w[i] = gamma[i] / ((eps + beta) * (eps + beta));
        wsum += w[i];
      }
      Vec rebuilt = Vec::Zero(degree + 1);
      for (int i = 0; i < 3; ++i) rebuilt += (w[i] / wsum) * cand[i];
      outputs[v]->coeffs.row(j) = rebuilt.transpose();
    }
  }
  return out;
}

}  // namespace

SWEState apply_limiter(const SWEState& state, const LimiterSpec& spec, Scalar g) {
  if (spec.kind == LimiterKind::none || state.h.degree == 0) return state;
  if (spec.kind == LimiterKind::minmod_tvb) return apply_minmod(state, spec.tvb_m, g);
  return apply_weno(state, spec.tvb_m, g);
}

}  // namespace riverdg
