#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "pinchlab/curves.hpp"
#include "pinchlab/jet.hpp"

// Diagonal metrics with pointwise second-order coefficient jets. Every metric
// here is a list of positive coefficients g_i, each depending on at most
// (r, t, w); evaluation returns the value plus all first and second partials
// against the full coordinate list, which is what the curvature routines need.

namespace pinchlab {

inline constexpr int kMaxDim = 8;

enum class Role { r, t, rho, tau, w, wj };

enum class FamilyTag { flat, family1, family2, hat1, hat2, fiber2 };

struct CoeffJet {
  double g = 0.0;
  std::array<double, kMaxDim> d1{};
  std::array<std::array<double, kMaxDim>, kMaxDim> d2{};
};

struct CoeffList {
  int n = 0;
  std::array<CoeffJet, kMaxDim> c{};
  const CoeffJet& operator[](int i) const { return c[i]; }
  CoeffJet& operator[](int i) { return c[i]; }
};

struct DomainBox {
  struct Axis {
    double lo = 0.0, hi = 0.0;
    int count = 1;  // count == 1 pins the coordinate at lo
  };
  std::vector<Axis> axes;

  long total() const {
    long n = 1;
    for (const auto& a : axes) n *= a.count;
    return n;
  }
  // decode a linear index (row-major over axes) into a grid point
  void point(long idx, double* x) const {
    for (int k = static_cast<int>(axes.size()) - 1; k >= 0; --k) {
      const auto& a = axes[k];
      const long i = idx % a.count;
      idx /= a.count;
      x[k] = a.count == 1 ? a.lo : a.lo + (a.hi - a.lo) * i / (a.count - 1);
    }
  }
};

namespace detail {

inline CoeffJet coeff_const(double v) {
  CoeffJet c;
  c.g = v;
  return c;
}

inline CoeffJet coeff_of_r(const Jet2& q, int ir) {
  CoeffJet c;
  c.g = q.v;
  c.d1[ir] = q.d1;
  c.d2[ir][ir] = q.d2;
  return c;
}

inline CoeffJet coeff_of_rt(const Jet2x2& q, int ir, int it) {
  CoeffJet c;
  c.g = q.v;
  c.d1[ir] = q.dr;
  c.d1[it] = q.dt;
  c.d2[ir][ir] = q.drr;
  c.d2[it][it] = q.dtt;
  c.d2[ir][it] = c.d2[it][ir] = q.drt;
  return c;
}

// e^{2w} * q(r, t), with distinct coordinate slots ir != it != iw
inline CoeffJet coeff_of_rtw(const Jet2x2& q, double w, int ir, int it, int iw) {
  const double s = std::exp(2.0 * w);
  CoeffJet c = coeff_of_rt(s * q, ir, it);
  c.d1[iw] = 2.0 * s * q.v;
  c.d2[iw][iw] = 4.0 * s * q.v;
  c.d2[iw][ir] = c.d2[ir][iw] = 2.0 * s * q.dr;
  c.d2[iw][it] = c.d2[it][iw] = 2.0 * s * q.dt;
  return c;
}

// e^{2w} * q(t)
inline CoeffJet coeff_of_tw(const Jet2& q, double w, int it, int iw) {
  const double s = std::exp(2.0 * w);
  CoeffJet c = coeff_of_r(s * q, it);
  c.d1[iw] = 2.0 * s * q.v;
  c.d2[iw][iw] = 4.0 * s * q.v;
  c.d2[iw][it] = c.d2[it][iw] = 2.0 * s * q.d1;
  return c;
}

}  // namespace detail

class DiagonalMetric {
 public:
  FamilyTag tag = FamilyTag::flat;
  int dim = 0;
  std::vector<Role> roles;
  int l = 0, m = 0, n_param = 0;
  double b = 1.0, a = 0.0, c1 = 1.0, c2 = 1.0;

  std::shared_ptr<const CoshCap> cap;            // family2 / hat2 / fiber2
  std::shared_ptr<const CappedWarpFactor> capped;  // family2 / hat2

  // scalar building blocks at a point
  Jet2 profile(double r) const { return CoreCurves::get().cusp_profile(r); }
  Jet2 rho_scale(double r) const {  // b e^{ramp(r)} profile(r)
    const CoreCurves& core = CoreCurves::get();
    return b * (exp(core.ramp(r)) * core.cusp_profile(r));
  }
  Jet2x2 warp(double r, double t) const {
    if (capped) return (*capped)(r, t);
    return WarpFactor(b)(r, t);
  }
  Jet2 cap_jets(double t) const { return (*cap)(t); }

  bool has_closed_tables() const {
    return tag != FamilyTag::flat && tag != FamilyTag::fiber2;
  }

  int index_of(Role role) const {
    for (int i = 0; i < dim; ++i)
      if (roles[i] == role) return i;
    return -1;
  }

  CoeffList coefficients(const double* x) const {
    CoeffList out;
    out.n = dim;
    switch (tag) {
      case FamilyTag::flat: {
        for (int i = 0; i < dim; ++i) out[i] = detail::coeff_const(1.0);
        break;
      }
      case FamilyTag::family1: {
        const double r = x[0], t = x[1];
        const Jet2 h = profile(r);
        const Jet2 H = rho_scale(r);
        const Jet2x2 hh = Jet2x2::of_r(h * h);
        const Jet2x2 FF = sqr(warp(r, t));
        out[0] = detail::coeff_const(1.0);
        out[1] = detail::coeff_of_r(h * h, 0);
        for (int i = 0; i < l; ++i) out[2 + i] = detail::coeff_of_r(H * H, 0);
        const CoeffJet tau_c = detail::coeff_of_rt(hh * FF, 0, 1);
        for (int i = 0; i < m; ++i) out[2 + l + i] = tau_c;
        break;
      }
      case FamilyTag::family2: {
        const double r = x[0], t = x[1];
        const Jet2 h = profile(r);
        const Jet2 H = rho_scale(r);
        const Jet2x2 hh = Jet2x2::of_r(h * h);
        out[0] = detail::coeff_const(1.0);
        out[1] = detail::coeff_of_r(h * h, 0);
        out[2] = detail::coeff_of_r(H * H, 0);
        out[3] = detail::coeff_of_rt(hh * sqr(warp(r, t)), 0, 1);
        if (n_param >= 3) {
          const Jet2x2 hTT = hh * Jet2x2::of_t(sqr(cap_jets(t)));
          out[4] = detail::coeff_of_rt(hTT, 0, 1);
          const double w = x[4];
          for (int i = 5; i < dim; ++i)
            out[i] = detail::coeff_of_rtw(hTT, w, 0, 1, 4);
        }
        break;
      }
      case FamilyTag::hat1: {
        const double t = x[0];
        const double A2 = b * b * std::exp(6.0);
        const CoreCurves& core = CoreCurves::get();
        const Jet2 u{t - 3.0, 1.0, 0.0};
        const Jet2 fu = compose(core.soft_exp(u.v), u);
        out[0] = detail::coeff_const(1.0);
        for (int i = 0; i < l; ++i) out[1 + i] = detail::coeff_const(A2);
        const CoeffJet tau_c = detail::coeff_of_r(A2 * (fu * fu), 0);
        for (int i = 0; i < m; ++i) out[1 + l + i] = tau_c;
        break;
      }
      case FamilyTag::hat2: {
        const double t = x[0];
        // the capped warp is r-independent from r = 5 on
        const Jet2x2 Ft = (*capped)(5.0, t);
        const Jet2 Fj{Ft.v, Ft.dt, Ft.dtt};
        out[0] = detail::coeff_const(1.0);
        out[1] = detail::coeff_const(b * b * std::exp(6.0));
        out[2] = detail::coeff_of_r(Fj * Fj, 0);
        if (n_param >= 3) {
          const Jet2 TT = sqr(cap_jets(t));
          out[3] = detail::coeff_of_r(TT, 0);
          const double w = x[3];
          for (int i = 4; i < dim; ++i)
            out[i] = detail::coeff_of_tw(TT, w, 0, 3);
        }
        break;
      }
      case FamilyTag::fiber2: {
        const double t = x[0];
        const Jet2 u{t - 5.0, 1.0, 0.0};
        const Jet2 sh = sinh(u), ch = cosh(u);
        out[0] = detail::coeff_const(1.0);
        out[1] = detail::coeff_of_r(sh * sh, 0);
        if (n_param >= 3) {
          out[2] = detail::coeff_of_r(ch * ch, 0);
          const double w = x[2];
          for (int i = 3; i < dim; ++i)
            out[i] = detail::coeff_of_tw(ch * ch, w, 0, 2);
        }
        break;
      }
    }
    return out;
  }

  CoeffList coefficients(const std::vector<double>& x) const {
    return coefficients(x.data());
  }
};

inline DiagonalMetric family1_metric(int l, int m, double b) {
  if (l < 0 || m < 0 || l + m < 1) throw std::invalid_argument("need l + m >= 1");
  if (!(b > 0.0)) throw std::invalid_argument("need b > 0");
  if (2 + l + m > kMaxDim) throw std::invalid_argument("dimension too large");
  DiagonalMetric g;
  g.tag = FamilyTag::family1;
  g.dim = 2 + l + m;
  g.l = l;
  g.m = m;
  g.b = b;
  g.roles = {Role::r, Role::t};
  for (int i = 0; i < l; ++i) g.roles.push_back(Role::rho);
  for (int i = 0; i < m; ++i) g.roles.push_back(Role::tau);
  return g;
}

inline DiagonalMetric family2_metric(int n, double a, double c1 = 1.0,
                                     double c2 = 1.0) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (!(a > 5.0)) throw std::invalid_argument("need a > 5");
  if (n + 2 > kMaxDim) throw std::invalid_argument("dimension too large");
  DiagonalMetric g;
  g.tag = FamilyTag::family2;
  g.dim = n + 2;
  g.n_param = n;
  g.a = a;
  g.b = b_of_a(a);
  g.c1 = c1;
  g.c2 = c2;
  g.roles = {Role::r, Role::t, Role::rho, Role::tau};
  if (n >= 3) g.roles.push_back(Role::w);
  for (int i = 0; i < n - 3; ++i) g.roles.push_back(Role::wj);
  g.cap = std::make_shared<const CoshCap>(a);
  g.capped = std::make_shared<const CappedWarpFactor>(a);
  return g;
}

inline DiagonalMetric hat_metric_family1(int l, int m, double b) {
  if (l < 0 || m < 0 || l + m < 1) throw std::invalid_argument("need l + m >= 1");
  DiagonalMetric g;
  g.tag = FamilyTag::hat1;
  g.dim = 1 + l + m;
  g.l = l;
  g.m = m;
  g.b = b;
  g.roles = {Role::t};
  for (int i = 0; i < l; ++i) g.roles.push_back(Role::rho);
  for (int i = 0; i < m; ++i) g.roles.push_back(Role::tau);
  return g;
}

inline DiagonalMetric hat_metric_family2(int n, double a) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (!(a > 5.0)) throw std::invalid_argument("need a > 5");
  DiagonalMetric g;
  g.tag = FamilyTag::hat2;
  g.dim = n + 1;
  g.n_param = n;
  g.a = a;
  g.b = b_of_a(a);
  g.roles = {Role::t, Role::rho, Role::tau};
  if (n >= 3) g.roles.push_back(Role::w);
  for (int i = 0; i < n - 3; ++i) g.roles.push_back(Role::wj);
  g.cap = std::make_shared<const CoshCap>(a);
  g.capped = std::make_shared<const CappedWarpFactor>(a);
  return g;
}

inline DiagonalMetric flat_metric(int n) {
  if (n < 2 || n > kMaxDim) throw std::invalid_argument("flat metric needs 2 <= n <= 8");
  DiagonalMetric g;
  g.tag = FamilyTag::flat;
  g.dim = n;
  g.roles.assign(n, Role::tau);
  return g;
}

// the fiber of the t >= a block: dt^2 + sinh^2(t-5) dtau^2
//                                + cosh^2(t-5) (dw^2 + sum e^{2w} dw_j^2)
inline DiagonalMetric fiber_block_family2(int n, double a) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  DiagonalMetric g;
  g.tag = FamilyTag::fiber2;
  g.dim = n;
  g.n_param = n;
  g.a = a;
  g.roles = {Role::t, Role::tau};
  if (n >= 3) g.roles.push_back(Role::w);
  for (int i = 0; i < n - 3; ++i) g.roles.push_back(Role::wj);
  return g;
}

inline DomainBox default_scan_box(const DiagonalMetric& g, int rt_count,
                                  int w_count = 5) {
  DomainBox box;
  box.axes.assign(g.dim, {0.0, 0.0, 1});
  bool has_wj = g.index_of(Role::wj) >= 0;
  for (int i = 0; i < g.dim; ++i) {
    switch (g.tag) {
      case FamilyTag::flat:
        if (i < 2) box.axes[i] = {-1.0, 1.0, rt_count};
        break;
      case FamilyTag::family1:
      case FamilyTag::family2:
        if (g.roles[i] == Role::r || g.roles[i] == Role::t)
          box.axes[i] = {-10.0, 10.0, rt_count};
        else if (g.roles[i] == Role::w && has_wj)
          box.axes[i] = {-2.0, 2.0, w_count};
        break;
      case FamilyTag::hat1:
        if (g.roles[i] == Role::t) box.axes[i] = {-10.0, 10.0, rt_count};
        break;
      case FamilyTag::hat2:
        if (g.roles[i] == Role::t) box.axes[i] = {-10.0, g.a + 5.0, rt_count};
        else if (g.roles[i] == Role::w && has_wj)
          box.axes[i] = {-2.0, 2.0, w_count};
        break;
      case FamilyTag::fiber2:
        if (g.roles[i] == Role::t) box.axes[i] = {g.a, g.a + 4.0, rt_count};
        else if (g.roles[i] == Role::w && has_wj)
          box.axes[i] = {-2.0, 2.0, w_count};
        break;
    }
  }
  return box;
}

}  // namespace pinchlab
