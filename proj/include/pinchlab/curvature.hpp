#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pinchlab/metrics.hpp"

// Curvature of diagonal metrics by two independent routes:
//   closed  — the per-family component tables (Christoffel symbols, the
//             R_{ijji} / R_{1jj2} curvature components, coordinate sectional
//             curvatures), evaluated from the curve jets;
//   generic — the diagonal-metric Christoffel formula from coefficient jets,
//             with the curvature tensor assembled from centered finite
//             differences of the symbols (step 1e-4, one Richardson halving).
// The generic route consumes only first-order coefficient data, so agreement
// between the two cross-checks the whole jet pipeline.

namespace pinchlab {

struct Gamma {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim * kMaxDim> v{};
  double& at(int k, int i, int j) { return v[(k * kMaxDim + i) * kMaxDim + j]; }
  double at(int k, int i, int j) const { return v[(k * kMaxDim + i) * kMaxDim + j]; }
  void set_sym(int k, int i, int j, double val) {
    at(k, i, j) = val;
    at(k, j, i) = val;
  }
};

// Only components of the form R_{ijji} (i<j) and R_{0jj1} are nonzero for the
// metric families here; this is the sparse closed-table representation.
struct SparseCurvature {
  int n = 0;
  std::array<std::array<double, kMaxDim>, kMaxDim> ijji{};  // [i][j], i < j
  std::array<double, kMaxDim> mixed{};                      // R_{0jj1} per j
  std::array<bool, kMaxDim> has_mixed{};
};

struct Riemann4 {
  int n = 0;
  std::vector<double> v;  // n^4, index ((i*n+j)*n+k)*n+l
  double at(int i, int j, int k, int l) const { return v[((i * n + j) * n + k) * n + l]; }
  double& at(int i, int j, int k, int l) { return v[((i * n + j) * n + k) * n + l]; }
};

inline Gamma christoffel_generic(const DiagonalMetric& g, const double* x) {
  const CoeffList c = g.coefficients(x);
  Gamma out;
  out.n = g.dim;
  for (int k = 0; k < g.dim; ++k) {
    const double inv2gk = 0.5 / c[k].g;
    for (int i = 0; i < g.dim; ++i) {
      // gamma^k_{ik} = d_i g_k / (2 g_k)
      out.set_sym(k, i, k, c[k].d1[i] * inv2gk);
    }
    for (int i = 0; i < g.dim; ++i) {
      if (i == k) continue;
      // gamma^k_{ii} = -d_k g_i / (2 g_k)
      out.set_sym(k, i, i, -c[i].d1[k] * inv2gk);
    }
  }
  return out;
}

inline Gamma christoffel_closed(const DiagonalMetric& g, const double* x) {
  Gamma out;
  out.n = g.dim;
  switch (g.tag) {
    case FamilyTag::family1: {
      const double r = x[0], t = x[1];
      const Jet2 h = g.profile(r);
      const Jet2 H = g.rho_scale(r);
      const Jet2x2 F = g.warp(r, t);
      const double hp_h = h.d1 / h.v, Hp_H = H.d1 / H.v;
      out.set_sym(1, 0, 1, hp_h);
      out.set_sym(0, 1, 1, -h.v * h.d1);
      for (int i = 2; i < 2 + g.l; ++i) {
        out.set_sym(i, 0, i, Hp_H);
        out.set_sym(0, i, i, -H.v * H.d1);
      }
      for (int i = 2 + g.l; i < g.dim; ++i) {
        out.set_sym(i, 0, i, F.dr / F.v + hp_h);
        out.set_sym(i, 1, i, F.dt / F.v);
        out.set_sym(0, i, i, -h.v * h.v * F.v * F.dr - h.v * h.d1 * F.v * F.v);
        out.set_sym(1, i, i, -F.v * F.dt);
      }
      break;
    }
    case FamilyTag::family2: {
      const double r = x[0], t = x[1];
      const Jet2 h = g.profile(r);
      const Jet2 H = g.rho_scale(r);
      const Jet2x2 F = g.warp(r, t);
      const double hp_h = h.d1 / h.v;
      out.set_sym(1, 0, 1, hp_h);
      out.set_sym(0, 1, 1, -h.v * h.d1);
      out.set_sym(2, 0, 2, H.d1 / H.v);
      out.set_sym(0, 2, 2, -H.v * H.d1);
      out.set_sym(3, 0, 3, F.dr / F.v + hp_h);
      out.set_sym(3, 1, 3, F.dt / F.v);
      out.set_sym(0, 3, 3, -h.v * h.v * F.v * F.dr - h.v * h.d1 * F.v * F.v);
      out.set_sym(1, 3, 3, -F.v * F.dt);
      if (g.dim > 4) {
        const Jet2 T = g.cap_jets(t);
        const double Tp_T = T.d1 / T.v;
        out.set_sym(4, 0, 4, hp_h);
        out.set_sym(4, 1, 4, Tp_T);
        out.set_sym(0, 4, 4, -h.v * h.d1 * T.v * T.v);
        out.set_sym(1, 4, 4, -T.v * T.d1);
        const double e2w = g.dim > 5 ? std::exp(2.0 * x[4]) : 0.0;
        for (int i = 5; i < g.dim; ++i) {
          out.set_sym(i, 0, i, hp_h);
          out.set_sym(i, 1, i, Tp_T);
          out.set_sym(i, 4, i, 1.0);
          out.set_sym(0, i, i, -e2w * h.v * h.d1 * T.v * T.v);
          out.set_sym(1, i, i, -e2w * T.v * T.d1);
          out.set_sym(4, i, i, -e2w);
        }
      }
      break;
    }
    case FamilyTag::hat1: {
      const double t = x[0];
      const double A2 = g.b * g.b * std::exp(6.0);
      const Jet2 f = CoreCurves::get().soft_exp(t - 3.0);
      for (int i = 1 + g.l; i < g.dim; ++i) {
        out.set_sym(i, 0, i, f.d1 / f.v);
        out.set_sym(0, i, i, -A2 * f.v * f.d1);
      }
      break;
    }
    case FamilyTag::hat2: {
      const double t = x[0];
      const Jet2x2 Ft = (*g.capped)(5.0, t);
      out.set_sym(2, 0, 2, Ft.dt / Ft.v);
      out.set_sym(0, 2, 2, -Ft.v * Ft.dt);
      if (g.dim > 3) {
        const Jet2 T = g.cap_jets(t);
        out.set_sym(3, 0, 3, T.d1 / T.v);
        out.set_sym(0, 3, 3, -T.v * T.d1);
        const double e2w = g.dim > 4 ? std::exp(2.0 * x[3]) : 0.0;
        for (int i = 4; i < g.dim; ++i) {
          out.set_sym(i, 0, i, T.d1 / T.v);
          out.set_sym(i, 3, i, 1.0);
          out.set_sym(0, i, i, -e2w * T.v * T.d1);
          out.set_sym(3, i, i, -e2w);
        }
      }
      break;
    }
    case FamilyTag::flat:
      break;
    default:
      throw std::invalid_argument("no closed Christoffel table for this metric");
  }
  return out;
}

inline SparseCurvature riemann_closed(const DiagonalMetric& g, const double* x) {
  SparseCurvature out;
  out.n = g.dim;
  auto put = [&](int i, int j, double v) { out.ijji[i][j] = v; };
  switch (g.tag) {
    case FamilyTag::family1: {
      const double r = x[0], t = x[1];
      const Jet2 h = g.profile(r);
      const Jet2 H = g.rho_scale(r);
      const Jet2x2 F = g.warp(r, t);
      const double h2 = h.v * h.v, F2 = F.v * F.v;
      for (int i = 2; i < 2 + g.l; ++i) {
        put(0, i, -H.v * H.d2);
        put(1, i, -h.v * h.d1 * H.v * H.d1);
        for (int j = i + 1; j < 2 + g.l; ++j)
          put(i, j, -H.v * H.v * H.d1 * H.d1);
      }
      put(0, 1, -h.v * h.d2);
      for (int j = 2 + g.l; j < g.dim; ++j) {
        put(0, j, -h.v * h.d2 * F2 - h2 * F.v * F.drr - 2.0 * h.v * h.d1 * F.v * F.dr);
        put(1, j, -h2 * h.v * h.d1 * F.v * F.dr - h2 * h.d1 * h.d1 * F2 - h2 * F.v * F.dtt);
        out.mixed[j] = -h2 * F.v * F.drt;
        out.has_mixed[j] = true;
        for (int i = 2; i < 2 + g.l; ++i)
          put(i, j, -h2 * F.v * F.dr * H.v * H.d1 - h.v * h.d1 * F2 * H.v * H.d1);
        for (int jj = j + 1; jj < g.dim; ++jj)
          put(j, jj, -h2 * h2 * F2 * F.dr * F.dr - 2.0 * h2 * h.v * h.d1 * F2 * F.v * F.dr -
                         h2 * h.d1 * h.d1 * F2 * F2 - h2 * F2 * F.dt * F.dt);
      }
      break;
    }
    case FamilyTag::family2: {
      const double r = x[0], t = x[1];
      const Jet2 h = g.profile(r);
      const Jet2 H = g.rho_scale(r);
      const Jet2x2 F = g.warp(r, t);
      const double h2 = h.v * h.v, F2 = F.v * F.v;
      put(0, 1, -h.v * h.d2);
      put(0, 2, -H.v * H.d2);
      put(0, 3, -h.v * h.d2 * F2 - h2 * F.v * F.drr - 2.0 * h.v * h.d1 * F.v * F.dr);
      out.mixed[3] = -h2 * F.v * F.drt;
      out.has_mixed[3] = true;
      put(1, 2, -h.v * h.d1 * H.v * H.d1);
      put(1, 3, -h2 * h.v * h.d1 * F.v * F.dr - h2 * h.d1 * h.d1 * F2 - h2 * F.v * F.dtt);
      put(2, 3, -h2 * F.v * F.dr * H.v * H.d1 - h.v * h.d1 * F2 * H.v * H.d1);
      if (g.dim > 4) {
        const Jet2 T = g.cap_jets(t);
        const double T2 = T.v * T.v;
        put(0, 4, -h.v * h.d2 * T2);
        put(1, 4, -h2 * h.d1 * h.d1 * T2 - h2 * T.v * T.d2);
        put(2, 4, -h.v * h.d1 * H.v * H.d1 * T2);
        put(3, 4, -h2 * h.v * h.d1 * F.v * F.dr * T2 - h2 * h.d1 * h.d1 * F2 * T2 -
                      h2 * F.v * F.dt * T.v * T.d1);
        const double e2w = g.dim > 5 ? std::exp(2.0 * x[4]) : 0.0;
        const double e4w = e2w * e2w;
        for (int i = 5; i < g.dim; ++i) {
          put(0, i, -e2w * h.v * h.d2 * T2);
          put(1, i, -e2w * (h2 * h.d1 * h.d1 * T2 + h2 * T.v * T.d2));
          put(2, i, -e2w * h.v * h.d1 * H.v * H.d1 * T2);
          put(3, i, -e2w * (h2 * h.v * h.d1 * F.v * F.dr * T2 +
                            h2 * h.d1 * h.d1 * F2 * T2 + h2 * F.v * F.dt * T.v * T.d1));
          put(4, i, -e2w * (h2 * h.d1 * h.d1 * T2 * T2 +
                            h2 * T2 * (1.0 + T.d1 * T.d1)));
          for (int j = i + 1; j < g.dim; ++j)
            put(i, j, -e4w * (h2 * h.d1 * h.d1 * T2 * T2 +
                              h2 * T2 * (1.0 + T.d1 * T.d1)));
        }
      }
      break;
    }
    case FamilyTag::hat1: {
      const double t = x[0];
      const double A2 = g.b * g.b * std::exp(6.0);
      const Jet2 f = CoreCurves::get().soft_exp(t - 3.0);
      for (int j = 1 + g.l; j < g.dim; ++j) put(0, j, -A2 * f.v * f.d2);
      break;
    }
    case FamilyTag::hat2: {
      const double t = x[0];
      const Jet2x2 F = (*g.capped)(5.0, t);
      put(0, 2, -F.v * F.dtt);
      if (g.dim > 3) {
        const Jet2 T = g.cap_jets(t);
        const double T2 = T.v * T.v;
        put(0, 3, -T.v * T.d2);
        put(2, 3, -F.v * F.dt * T.v * T.d1);
        const double e2w = g.dim > 4 ? std::exp(2.0 * x[3]) : 0.0;
        const double e4w = e2w * e2w;
        for (int i = 4; i < g.dim; ++i) {
          put(0, i, -e2w * T.v * T.d2);
          put(2, i, -e2w * F.v * F.dt * T.v * T.d1);
          put(3, i, -e2w * T2 * (1.0 + T.d1 * T.d1));
          for (int j = i + 1; j < g.dim; ++j)
            put(i, j, -e4w * T2 * (1.0 + T.d1 * T.d1));
        }
      }
      break;
    }
    case FamilyTag::flat:
      break;
    default:
      throw std::invalid_argument("no closed curvature table for this metric");
  }
  return out;
}

// The axes a metric's coefficients actually depend on (the rest have exactly
// vanishing Christoffel derivatives and are skipped by the FD loop).
inline std::vector<int> active_axes(const DiagonalMetric& g) {
  std::vector<int> axes;
  for (int i = 0; i < g.dim; ++i)
    if (g.roles[i] == Role::r || g.roles[i] == Role::t ||
        (g.roles[i] == Role::w && g.index_of(Role::wj) >= 0))
      axes.push_back(i);
  if (g.tag == FamilyTag::flat) axes.clear();
  return axes;
}

inline Riemann4 riemann_generic(const DiagonalMetric& g, const double* x,
                                double step = 1e-4) {
  const int n = g.dim;
  const Gamma gamma0 = christoffel_generic(g, x);
  const CoeffList coeff = g.coefficients(x);

  // dGamma[a] = d/dx_a of the symbols, centered differences with one
  // Richardson halving: (4 D_{s/2} - D_s) / 3
  std::array<Gamma, kMaxDim> dgamma{};
  for (auto& d : dgamma) d.n = n;
  std::array<double, kMaxDim> xp{};
  for (int i = 0; i < n; ++i) xp[i] = x[i];
  for (int a : active_axes(g)) {
    auto diff = [&](double s) {
      xp[a] = x[a] + s;
      Gamma plus = christoffel_generic(g, xp.data());
      xp[a] = x[a] - s;
      Gamma minus = christoffel_generic(g, xp.data());
      xp[a] = x[a];
      Gamma d;
      d.n = n;
      for (std::size_t q = 0; q < plus.v.size(); ++q)
        d.v[q] = (plus.v[q] - minus.v[q]) / (2.0 * s);
      return d;
    };
    const Gamma d1 = diff(step);
    const Gamma d2 = diff(0.5 * step);
    for (std::size_t q = 0; q < d1.v.size(); ++q)
      dgamma[a].v[q] = (4.0 * d2.v[q] - d1.v[q]) / 3.0;
  }

  Riemann4 out;
  out.n = n;
  out.v.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int el = 0; el < n; ++el) {
          double r = dgamma[i].at(el, j, k) - dgamma[j].at(el, i, k);
          for (int mm = 0; mm < n; ++mm)
            r += gamma0.at(el, i, mm) * gamma0.at(mm, j, k) -
                 gamma0.at(el, j, mm) * gamma0.at(mm, i, k);
          out.at(i, j, k, el) = r * coeff[el].g;
        }
  return out;
}

inline std::array<std::array<double, kMaxDim>, kMaxDim> sectional_coordinate(
    const DiagonalMetric& g, const double* x) {
  std::array<std::array<double, kMaxDim>, kMaxDim> K{};
  switch (g.tag) {
    case FamilyTag::family1:
    case FamilyTag::family2:
    case FamilyTag::hat1:
    case FamilyTag::hat2: {
      const SparseCurvature sp = riemann_closed(g, x);
      const CoeffList c = g.coefficients(x);
      for (int i = 0; i < g.dim; ++i)
        for (int j = i + 1; j < g.dim; ++j) {
          K[i][j] = sp.ijji[i][j] / (c[i].g * c[j].g);
          K[j][i] = K[i][j];
        }
      break;
    }
    default:
      throw std::invalid_argument("no closed sectional table for this metric");
  }
  return K;
}

namespace detail {

struct CurvatureContext {
  int n = 0;
  CoeffList g;
  bool sparse = false;
  SparseCurvature sp;
  Riemann4 full;
};

inline CurvatureContext curvature_at(const DiagonalMetric& g, const double* x) {
  CurvatureContext ctx;
  ctx.n = g.dim;
  ctx.g = g.coefficients(x);
  if (g.has_closed_tables()) {
    ctx.sparse = true;
    ctx.sp = riemann_closed(g, x);
  } else {
    ctx.full = riemann_generic(g, x);
  }
  return ctx;
}

// quadratic form R(u, v, v, u)
inline double curvature_quad(const CurvatureContext& ctx, const double* u,
                             const double* v) {
  double q = 0.0;
  if (ctx.sparse) {
    for (int i = 0; i < ctx.n; ++i)
      for (int j = i + 1; j < ctx.n; ++j) {
        const double wij = u[i] * v[j] - u[j] * v[i];
        q += ctx.sp.ijji[i][j] * wij * wij;
      }
    for (int j = 0; j < ctx.n; ++j)
      if (ctx.sp.has_mixed[j])
        q += 2.0 * ctx.sp.mixed[j] * (u[0] * v[j] - u[j] * v[0]) *
             (u[1] * v[j] - u[j] * v[1]);
  } else {
    for (int i = 0; i < ctx.n; ++i)
      for (int j = 0; j < ctx.n; ++j)
        for (int k = 0; k < ctx.n; ++k)
          for (int el = 0; el < ctx.n; ++el)
            q += ctx.full.at(i, j, k, el) * u[i] * v[j] * v[k] * u[el];
  }
  return q;
}

inline double plane_sectional(const CurvatureContext& ctx, const double* u_in,
                              const double* v_in) {
  const int n = ctx.n;
  std::array<double, kMaxDim> u{}, v{};
  double uu = 0.0, uv = 0.0, vv_in = 0.0;
  for (int i = 0; i < n; ++i) {
    u[i] = u_in[i];
    uu += u[i] * u[i] * ctx.g[i].g;
    uv += u_in[i] * v_in[i] * ctx.g[i].g;
    vv_in += v_in[i] * v_in[i] * ctx.g[i].g;
  }
  if (!(uu > 0.0)) throw std::invalid_argument("degenerate plane");
  for (int i = 0; i < n; ++i) v[i] = v_in[i] - (uv / uu) * u[i];
  double vv = 0.0;
  for (int i = 0; i < n; ++i) vv += v[i] * v[i] * ctx.g[i].g;
  if (!(vv > 1e-24 * vv_in) || vv == 0.0)
    throw std::invalid_argument("degenerate plane");
  const double q = curvature_quad(ctx, u.data(), v.data());
  return q / (uu * vv);
}

// Exact pointwise extremes of the sectional curvature over all 2-planes.
// With only R_{ijji} components the curvature quadratic form is a weighted
// average of the coordinate values, so coordinate planes are extremal; each
// mixed component R_{0jj1} adds a 2x2 generalized eigenvalue pencil in the
// (x_0, x_1, x_j) subspace whose extremes can dip past the coordinate values.
inline void sectional_extremes(const CurvatureContext& ctx, double& kmin,
                               double& kmax) {
  kmin = std::numeric_limits<double>::infinity();
  kmax = -std::numeric_limits<double>::infinity();
  if (!ctx.sparse) throw std::logic_error("extremes need sparse tables");
  for (int i = 0; i < ctx.n; ++i)
    for (int j = i + 1; j < ctx.n; ++j) {
      const double k = ctx.sp.ijji[i][j] / (ctx.g[i].g * ctx.g[j].g);
      kmin = std::min(kmin, k);
      kmax = std::max(kmax, k);
    }
  for (int j = 0; j < ctx.n; ++j) {
    if (!ctx.sp.has_mixed[j]) continue;
    const double a = ctx.sp.ijji[0][j], c = ctx.sp.ijji[1][j];
    const double bm = ctx.sp.mixed[j];
    const double p = ctx.g[0].g * ctx.g[j].g, q = ctx.g[1].g * ctx.g[j].g;
    const double tr = a * q + c * p;
    const double disc = std::sqrt((a * q - c * p) * (a * q - c * p) +
                                  4.0 * bm * bm * p * q);
    kmin = std::min(kmin, (tr - disc) / (2.0 * p * q));
    kmax = std::max(kmax, (tr + disc) / (2.0 * p * q));
  }
}

struct SplitMix64 {
  std::uint64_t s;
  explicit SplitMix64(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double gaussian() {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * M_PI * uniform());
  }
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t point,
                              std::uint64_t plane) {
  SplitMix64 h(seed);
  h.s ^= h.next() + point;
  h.s ^= h.next() + plane;
  return h.next();
}

}  // namespace detail

inline double sectional_plane(const DiagonalMetric& g, const double* x,
                              const double* u, const double* v) {
  const detail::CurvatureContext ctx = detail::curvature_at(g, x);
  return detail::plane_sectional(ctx, u, v);
}

struct ScanRow {
  double r = 0, t = 0, w = 0;
  int plane_id = -1;
  double k = 0;
};

struct PinchReport {
  double min_k = std::numeric_limits<double>::infinity();
  double max_k = -std::numeric_limits<double>::infinity();
  std::vector<double> min_point, max_point;
  int min_plane = -1, max_plane = -1;
  long grid_points = 0;
  long samples = 0;
  int planes_per_point = 0;
  std::uint64_t seed = 0;
};

// Plane ids: i*dim+j for the coordinate plane (i, j); dim^2 + j and
// dim^2 + dim + j for the pencil min/max in the (x_0, x_1, x_j) subspace;
// 2*dim^2 + k for the k-th random plane at the point.
inline PinchReport pinch_scan(const DiagonalMetric& g, const DomainBox& box,
                              int planes_per_point, std::uint64_t seed,
                              int threads = 1,
                              std::vector<ScanRow>* rows = nullptr) {
  if (static_cast<int>(box.axes.size()) != g.dim)
    throw std::invalid_argument("box rank must match metric dimension");
  const long total = box.total();
  const int n = g.dim;
  const int ir = g.index_of(Role::r), it = g.index_of(Role::t),
            iw = g.index_of(Role::w);

  struct Partial {
    PinchReport rep;
    std::vector<ScanRow> rows;
  };

  auto run_range = [&](long lo, long hi, Partial& part) {
    std::array<double, kMaxDim> x{};
    std::array<double, kMaxDim> u{}, v{};
    auto note = [&](double k, long idx, int plane) {
      part.rep.samples++;
      if (k < part.rep.min_k) {
        part.rep.min_k = k;
        part.rep.min_point.assign(x.begin(), x.begin() + n);
        part.rep.min_plane = plane;
      }
      if (k > part.rep.max_k) {
        part.rep.max_k = k;
        part.rep.max_point.assign(x.begin(), x.begin() + n);
        part.rep.max_plane = plane;
      }
      if (rows)
        part.rows.push_back({ir >= 0 ? x[ir] : 0.0, it >= 0 ? x[it] : 0.0,
                             iw >= 0 ? x[iw] : 0.0, plane, k});
    };
    for (long idx = lo; idx < hi; ++idx) {
      box.point(idx, x.data());
      const detail::CurvatureContext ctx = detail::curvature_at(g, x.data());
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double k;
          if (ctx.sparse) {
            k = ctx.sp.ijji[i][j] / (ctx.g[i].g * ctx.g[j].g);
          } else {
            std::fill(u.begin(), u.end(), 0.0);
            std::fill(v.begin(), v.end(), 0.0);
            u[i] = 1.0;
            v[j] = 1.0;
            k = detail::plane_sectional(ctx, u.data(), v.data());
          }
          note(k, idx, i * n + j);
        }
      if (ctx.sparse) {
        for (int j = 0; j < n; ++j) {
          if (!ctx.sp.has_mixed[j]) continue;
          const double a = ctx.sp.ijji[0][j], c = ctx.sp.ijji[1][j];
          const double bm = ctx.sp.mixed[j];
          const double p = ctx.g[0].g * ctx.g[j].g, q = ctx.g[1].g * ctx.g[j].g;
          const double disc = std::sqrt((a * q - c * p) * (a * q - c * p) +
                                        4.0 * bm * bm * p * q);
          note((a * q + c * p - disc) / (2.0 * p * q), idx, n * n + j);
          note((a * q + c * p + disc) / (2.0 * p * q), idx, n * n + n + j);
        }
      }
      for (int kpl = 0; kpl < planes_per_point; ++kpl) {
        detail::SplitMix64 rng(detail::mix_seed(seed, idx, kpl));
        for (int i = 0; i < n; ++i) u[i] = rng.gaussian();
        for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
        double k;
        try {
          k = detail::plane_sectional(ctx, u.data(), v.data());
        } catch (const std::invalid_argument&) {
          continue;  // vanishing chance of a degenerate draw
        }
        note(k, idx, 2 * n * n + kpl);
      }
    }
  };

  const int nthreads = std::max(1, threads);
  std::vector<Partial> parts(nthreads);
  if (nthreads == 1) {
    run_range(0, total, parts[0]);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (total + nthreads - 1) / nthreads;
    for (int ti = 0; ti < nthreads; ++ti) {
      const long lo = ti * chunk, hi = std::min(total, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi, ti] { run_range(lo, hi, parts[ti]); });
    }
    for (auto& th : pool) th.join();
  }

  PinchReport rep;
  rep.grid_points = total;
  rep.planes_per_point = planes_per_point;
  rep.seed = seed;
  for (auto& p : parts) {
    rep.samples += p.rep.samples;
    if (p.rep.min_k < rep.min_k) {
      rep.min_k = p.rep.min_k;
      rep.min_point = p.rep.min_point;
      rep.min_plane = p.rep.min_plane;
    }
    if (p.rep.max_k > rep.max_k) {
      rep.max_k = p.rep.max_k;
      rep.max_point = p.rep.max_point;
      rep.max_plane = p.rep.max_plane;
    }
    if (rows) rows->insert(rows->end(), p.rows.begin(), p.rows.end());
  }
  return rep;
}

}  // namespace pinchlab
