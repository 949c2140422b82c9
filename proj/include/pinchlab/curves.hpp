#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "pinchlab/jet.hpp"
#include "pinchlab/mollifier.hpp"
#include "pinchlab/quadrature.hpp"

// The one- and two-variable coefficient curves behind the cusp metrics. Each
// curve has exact closed-form branches outside a finite transition band; the
// bands are filled either by convolution against the unit bump (which keeps
// monotonicity/convexity of the underlying kinked function) or, for the ramp,
// by integrating a C-infinity step. Constructors re-verify every claimed
// pointwise constraint on a grid and throw if the construction misses one.

namespace pinchlab {

namespace detail {

inline void construction_check(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("curve construction violates constraint: " + what);
}

// C-infinity step: 0 for u <= 0, 1 for u >= 1, strictly increasing between,
// symmetric about 1/2 (so its integral over [0,1] is exactly 1/2).
inline Jet2 step_jets(double u) {
  if (u <= 0.0) return {0.0, 0.0, 0.0};
  if (u >= 1.0) return {1.0, 0.0, 0.0};
  auto bump_exp = [](double s) -> Jet2 {  // e^{-1/s} with derivatives in s
    if (s <= 0.0) return {0.0, 0.0, 0.0};
    const double e = std::exp(-1.0 / s);
    if (e == 0.0) return {0.0, 0.0, 0.0};
    const double s2 = s * s;
    return {e, e / s2, e * (1.0 - 2.0 * s) / (s2 * s2)};
  };
  const Jet2 bu = bump_exp(u);
  const Jet2 bm = bump_exp(1.0 - u);  // jets in (1-u); flip odd orders
  const Jet2 bflip{bm.v, -bm.d1, bm.d2};
  return bu / (bu + bflip);
}

}  // namespace detail

// One-variable curve: a domain interval plus a deterministic jet evaluator.
struct SmoothFn1 {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::function<Jet2(double)> eval;
  Jet2 operator()(double x) const { return eval(x); }
};

// Shared deterministic core: the unit bump, the constant c with
// (bump * e^t) = c e^t, and the three parameter-free curves.
class CoreCurves {
 public:
  static const CoreCurves& get() {
    static const CoreCurves core;
    return core;
  }

  const Mollifier& bump() const { return bump_; }
  double c() const { return c_; }

  // soft_exp: 1 for s <= -1, c e^s for s >= 1, convolution of the bump with
  // the hinge max(1, e^s) in between. Satisfies value >= 1, d1, d2 >= 0,
  // d1 <= value, d1 <= d2, and d2 - d1 = bump(s).
  Jet2 soft_exp(double s) const {
    if (s <= -1.0) return {1.0, 0.0, 0.0};
    if (s >= 1.0) {
      const double e = c_ * std::exp(s);
      return {e, e, e};
    }
    // value = int_{s-1}^{0} bump(s-t) dt + int_{0}^{s+1} e^t bump(s-t) dt
    const double flat = integrate_fixed(
        [&](double t) { return bump_(s - t); }, s - 1.0, 0.0);
    const double grow = integrate_fixed(
        [&](double t) { return std::exp(t) * bump_(s - t); }, 0.0, s + 1.0);
    return {flat + grow, grow, grow + bump_(s)};
  }

  // ramp: r for r <= 1, 3 for r >= 5; derivative is the symmetric smooth step
  // step((5-r)/4), so the ramp gains exactly 2 across [1,5], the second
  // derivative stays in [-1/2, 0], and all derivatives match at the ends.
  Jet2 ramp(double r) const {
    if (r <= 1.0) return {r, 1.0, 0.0};
    if (r >= 5.0) return {3.0, 0.0, 0.0};
    const Jet2 s = detail::step_jets((5.0 - r) / 4.0);
    const double value =
        1.0 + integrate_fixed(
                  [](double x) { return detail::step_jets((5.0 - x) / 4.0).v; },
                  1.0, r);
    return {value, s.v, -s.d1 / 4.0};
  }

  // cusp_profile: 1 + e^r for r <= -1, 2 e^r for r >= 1; in between the
  // convolution of the bump with max(1 + e^s/c, 2 e^s/c), whose kink at 0 is
  // convex, so d1 > 0 and d2 > 0 hold everywhere by construction.
  Jet2 cusp_profile(double r) const {
    if (r <= -1.0) {
      const double e = std::exp(r);
      return {1.0 + e, e, e};
    }
    if (r >= 1.0) {
      const double e = 2.0 * std::exp(r);
      return {e, e, e};
    }
    const double ci = 1.0 / c_;
    const double flat = integrate_fixed(
        [&](double s) { return (1.0 + ci * std::exp(s)) * bump_(r - s); },
        r - 1.0, 0.0);
    const double lo_exp = integrate_fixed(
        [&](double s) { return ci * std::exp(s) * bump_(r - s); }, r - 1.0, 0.0);
    const double hi_exp = integrate_fixed(
        [&](double s) { return 2.0 * ci * std::exp(s) * bump_(r - s); }, 0.0,
        r + 1.0);
    const double d1 = lo_exp + hi_exp;
    return {flat + hi_exp, d1, d1 + ci * bump_(r)};
  }

  CoreCurves(const CoreCurves&) = delete;
  CoreCurves& operator=(const CoreCurves&) = delete;

 private:
  CoreCurves() {
    c_ = integrate_fixed([&](double u) { return bump_(u) * std::exp(-u); },
                         -1.0, 1.0);
    detail::construction_check(c_ > 1.0, "c > 1");
    verify_on_grid();
  }

  void verify_on_grid() const {
    using detail::construction_check;
    // ramp constraints, 1e4 points across the transition. Strict positivity
    // of ramp' is only representable away from the flat ends (the step
    // underflows within ~5e-3 of r = 5), so it is checked on a 0.01 inset
    // and nonnegativity everywhere.
    for (int i = 0; i <= 10000; ++i) {
      const double r = 1.0 + 4.0 * i / 10000.0;
      const Jet2 j = ramp(r);
      construction_check(j.d1 >= 0.0, "ramp' >= 0");
      if (r > 1.01 && r < 4.99)
        construction_check(j.d1 > 0.0, "ramp' > 0 on (1,5)");
      construction_check(j.d2 <= 1e-15 && j.d2 >= -0.5 - 1e-12,
                         "-1/2 <= ramp'' <= 0");
    }
    construction_check(std::abs(ramp(5.0 - 1e-13).v - 3.0) < 1e-10, "ramp(5) = 3");
    construction_check(std::abs(ramp(1.0).v - 1.0) == 0.0, "ramp(1) = 1");
    // cusp profile positivity across the band
    for (int i = 0; i <= 4000; ++i) {
      const double r = -2.0 + 4.0 * i / 4000.0;
      const Jet2 j = cusp_profile(r);
      construction_check(j.v >= 1.0 - 1e-12, "profile >= 1");
      construction_check(j.d1 > 0.0, "profile' > 0");
      construction_check(j.d2 > 0.0, "profile'' > 0");
    }
    // soft_exp constraints
    for (int i = 0; i <= 4000; ++i) {
      const double s = -2.0 + 4.0 * i / 4000.0;
      const Jet2 j = soft_exp(s);
      construction_check(j.v >= 1.0 - 1e-12, "soft_exp >= 1");
      construction_check(j.d1 >= 0.0 && j.d2 >= 0.0, "soft_exp', '' >= 0");
      construction_check(j.d1 <= j.v + 1e-14 * j.v, "soft_exp' <= soft_exp");
      construction_check(j.d1 <= j.d2 + 1e-14 * std::max(1.0, j.d2),
                         "soft_exp' <= soft_exp''");
    }
  }

  Mollifier bump_;
  double c_;
};

inline double conv_const_c() { return CoreCurves::get().c(); }

// b(a) puts the graphs of b c e^t and sinh(t-5) through a common point at
// t = a - (a-5)/2.
inline double b_of_a(double a) {
  const double delta = 0.5 * (a - 5.0);
  return std::exp(-(a - delta)) * std::sinh(delta) / conv_const_c();
}

// Two-variable warp factor b e^{ramp(r)} soft_exp(t - ramp(r)).
class WarpFactor {
 public:
  explicit WarpFactor(double b) : b_(b) {
    if (!(b > 0.0)) throw std::invalid_argument("warp factor needs b > 0");
  }

  Jet2x2 operator()(double r, double t) const {
    const CoreCurves& core = CoreCurves::get();
    const Jet2x2 ramp = Jet2x2::of_r(core.ramp(r));
    const Jet2x2 u = Jet2x2::of_t(Jet2::variable(t)) - ramp;
    const Jet2x2 fu = compose(core.soft_exp(u.v), u);
    return b_ * (exp(ramp) * fu);
  }

  double b() const { return b_; }

 private:
  double b_;
};

inline WarpFactor build_F(double b) { return WarpFactor(b); }

// cosh_cap: 1 for t <= 4, cosh(t-5) for t >= a. The band convolves the bump
// (rescaled to width w) against max(1, cosh(s-5)/c_w), whose crossing sits at
// t* = 5 + acosh(c_w); the c_w prefactor makes the cosh branch reproduce
// itself exactly under the convolution.
class CoshCap {
 public:
  explicit CoshCap(double a) : a_(a) {
    if (!(a > 5.0)) throw std::invalid_argument("cosh cap needs a > 5");
    w_ = std::min(1.0, 0.5 * (a - 5.0));
    const Mollifier& bump = CoreCurves::get().bump();
    cw_ = integrate_fixed([&](double v) { return bump(v) * std::cosh(w_ * v); },
                          -1.0, 1.0);
    tstar_ = 5.0 + std::acosh(cw_);
    detail::construction_check(tstar_ - w_ >= 4.0 && tstar_ + w_ <= a_,
                               "cosh cap band inside (4, a)");
    verify_on_grid();
  }

  Jet2 operator()(double t) const {
    if (t <= tstar_ - w_) return {1.0, 0.0, 0.0};
    if (t >= tstar_ + w_) {
      const Jet2 u{t - 5.0, 1.0, 0.0};
      return cosh(u);
    }
    const Mollifier& bump = CoreCurves::get().bump();
    const double vstar = (t - tstar_) / w_;
    const double flat =
        integrate_fixed([&](double v) { return bump(v); }, vstar, 1.0);
    const double grow = integrate_fixed(
        [&](double v) { return bump(v) * std::cosh(t - w_ * v - 5.0) / cw_; },
        -1.0, vstar);
    const double d1 = integrate_fixed(
        [&](double v) { return bump(v) * std::sinh(t - w_ * v - 5.0) / cw_; },
        -1.0, vstar);
    const double atom = bump(vstar) / w_ * std::sinh(tstar_ - 5.0) / cw_;
    return {flat + grow, d1, grow + atom};
  }

  double a() const { return a_; }

 private:
  void verify_on_grid() const {
    for (int i = 0; i <= 4000; ++i) {
      const double t = 3.0 + (a_ - 1.0) * i / 4000.0;
      const Jet2 j = (*this)(t);
      detail::construction_check(j.v >= 1.0 - 1e-13, "cosh cap >= 1");
      detail::construction_check(j.d1 >= -1e-13, "cosh cap' >= 0");
      detail::construction_check(j.d2 >= -1e-13, "cosh cap'' >= 0");
    }
  }

  double a_, w_, cw_, tstar_;
};

inline CoshCap build_T(double a) { return CoshCap(a); }

// capped warp factor: the warp factor (with b = b(a)) for t below the band,
// sinh(t-5) above it, and a width-(delta/2) mollified blend of the two
// exponential branches across their crossing at t = a - delta. The blend is
// r-independent and keeps both t-derivatives nonnegative since the underlying
// kink is convex.
class CappedWarpFactor {
 public:
  explicit CappedWarpFactor(double a)
      : a_(a),
        delta_(0.5 * (a - 5.0)),
        width_(0.25 * (a - 5.0)),
        tx_(a - 0.5 * (a - 5.0)),
        warp_(b_of_a(a)) {
    if (!(a > 5.0)) throw std::invalid_argument("capped warp needs a > 5");
    const Mollifier& bump = CoreCurves::get().bump();
    cw_ = integrate_fixed(
        [&](double v) { return bump(v) * std::cosh(width_ * v); }, -1.0, 1.0);
    bc_ = warp_.b() * conv_const_c();
    verify_on_grid();
  }

  Jet2x2 operator()(double r, double t) const {
    if (t <= tx_ - width_) return warp_(r, t);
    if (t >= tx_ + width_) {
      Jet2x2 out{};
      out.v = std::sinh(t - 5.0);
      out.dt = std::cosh(t - 5.0);
      out.dtt = out.v;
      return out;
    }
    const Mollifier& bump = CoreCurves::get().bump();
    const double vstar = (t - tx_) / width_;
    // branch b c e^{t - wv} applies for v >= vstar, sinh(t - wv - 5) below
    const double grow = integrate_fixed(
        [&](double v) { return bump(v) * bc_ * std::exp(t - width_ * v) / cw_; },
        vstar, 1.0);
    const double sh = integrate_fixed(
        [&](double v) {
          return bump(v) * std::sinh(t - width_ * v - 5.0) / cw_;
        },
        -1.0, vstar);
    const double ch = integrate_fixed(
        [&](double v) {
          return bump(v) * std::cosh(t - width_ * v - 5.0) / cw_;
        },
        -1.0, vstar);
    const double atom = bump(vstar) / width_ * std::exp(-delta_) / cw_;
    Jet2x2 out{};
    out.v = grow + sh;
    out.dt = grow + ch;
    out.dtt = grow + sh + atom;
    return out;
  }

  double a() const { return a_; }
  double b() const { return warp_.b(); }
  const WarpFactor& uncapped() const { return warp_; }

 private:
  void verify_on_grid() const {
    using detail::construction_check;
    const double bc = bc_;
    // crossing consistency: b c e^{a-delta} = sinh(delta)
    construction_check(
        std::abs(bc * std::exp(tx_) - std::sinh(delta_)) <
            1e-12 * std::sinh(delta_) + 1e-300,
        "capped warp crossing");
    for (int i = 0; i <= 4000; ++i) {
      const double t = 3.0 + (a_ - 1.0) * i / 4000.0;
      const Jet2x2 j = (*this)(0.0, t);
      construction_check(j.v > 0.0, "capped warp > 0");
      construction_check(j.dt >= -1e-13 * std::max(1.0, j.v), "capped warp_t >= 0");
      construction_check(j.dtt >= -1e-13 * std::max(1.0, j.v), "capped warp_tt >= 0");
      if (t >= 4.0) {
        const Jet2x2 far = (*this)(7.0, t);
        construction_check(std::abs(far.v - j.v) <= 1e-12 * j.v,
                           "capped warp r-independent for t >= 4");
      }
      if (t >= a_)
        construction_check(j.v == std::sinh(t - 5.0), "capped warp = sinh(t-5)");
    }
  }

  double a_, delta_, width_, tx_, cw_, bc_;
  WarpFactor warp_;
};

inline CappedWarpFactor build_Ftilde(double a) { return CappedWarpFactor(a); }

// SmoothFn1 wrappers over the shared core.
inline SmoothFn1 mollifier_fn() {
  return {-8.0, 8.0, [](double x) { return CoreCurves::get().bump().jets(x); }};
}
inline SmoothFn1 build_f() {
  return {-1e9, 1e9, [](double s) { return CoreCurves::get().soft_exp(s); }};
}
inline SmoothFn1 build_R() {
  return {-1e9, 1e9, [](double r) { return CoreCurves::get().ramp(r); }};
}
inline SmoothFn1 build_h() {
  return {-1e9, 1e9, [](double r) { return CoreCurves::get().cusp_profile(r); }};
}
inline SmoothFn1 build_T_fn(double a) {
  return {-1e9, 1e9, [cap = CoshCap(a)](double t) { return cap(t); }};
}

}  // namespace pinchlab
