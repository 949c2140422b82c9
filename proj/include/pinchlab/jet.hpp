#pragma once

#include <cmath>

// Second-order forward-mode jets in one and two variables. A Jet2 carries a
// function value with its first and second derivative; a Jet2x2 carries a
// value with both first partials and the three second partials (the mixed
// partial is stored once). Arithmetic propagates derivatives exactly, so any
// expression built from these types yields machine-accurate jets.

namespace pinchlab {

struct Jet2 {
  double v = 0.0;   // value
  double d1 = 0.0;  // first derivative
  double d2 = 0.0;  // second derivative

  static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
  static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }
};

constexpr Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}
constexpr Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}
constexpr Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }
constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
constexpr Jet2 operator*(double s, const Jet2& a) { return {s * a.v, s * a.d1, s * a.d2}; }
constexpr Jet2 operator*(const Jet2& a, double s) { return s * a; }
constexpr Jet2 operator+(const Jet2& a, double s) { return {a.v + s, a.d1, a.d2}; }
constexpr Jet2 operator+(double s, const Jet2& a) { return a + s; }
constexpr Jet2 operator-(const Jet2& a, double s) { return {a.v - s, a.d1, a.d2}; }
constexpr Jet2 operator-(double s, const Jet2& a) { return {s - a.v, -a.d1, -a.d2}; }

// a = q*b  =>  a' = q'b + qb',  a'' = q''b + 2q'b' + qb''
constexpr Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double q = a.v / b.v;
  const double q1 = (a.d1 - q * b.d1) / b.v;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
  return {q, q1, q2};
}
constexpr Jet2 operator/(const Jet2& a, double s) { return {a.v / s, a.d1 / s, a.d2 / s}; }
constexpr Jet2 operator/(double s, const Jet2& b) { return Jet2::constant(s) / b; }

// f evaluated at u.v composed with the inner jet u: (f∘u)'' = f''u'^2 + f'u''.
constexpr Jet2 compose(const Jet2& f, const Jet2& u) {
  return {f.v, f.d1 * u.d1, f.d2 * u.d1 * u.d1 + f.d1 * u.d2};
}

inline Jet2 exp(const Jet2& u) {
  const double e = std::exp(u.v);
  return compose({e, e, e}, u);
}
inline Jet2 sinh(const Jet2& u) {
  const double s = std::sinh(u.v), c = std::cosh(u.v);
  return compose({s, c, s}, u);
}
inline Jet2 cosh(const Jet2& u) {
  const double c = std::cosh(u.v), s = std::sinh(u.v);
  return compose({c, s, c}, u);
}
inline Jet2 sqr(const Jet2& u) { return u * u; }

struct Jet2x2 {
  double v = 0.0;
  double dr = 0.0, dt = 0.0;
  double drr = 0.0, drt = 0.0, dtt = 0.0;

  static constexpr Jet2x2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
  // lift a jet in the first variable
  static constexpr Jet2x2 of_r(const Jet2& a) { return {a.v, a.d1, 0, a.d2, 0, 0}; }
  // lift a jet in the second variable
  static constexpr Jet2x2 of_t(const Jet2& a) { return {a.v, 0, a.d1, 0, 0, a.d2}; }
};

constexpr Jet2x2 operator+(const Jet2x2& a, const Jet2x2& b) {
  return {a.v + b.v, a.dr + b.dr, a.dt + b.dt,
          a.drr + b.drr, a.drt + b.drt, a.dtt + b.dtt};
}
constexpr Jet2x2 operator-(const Jet2x2& a, const Jet2x2& b) {
  return {a.v - b.v, a.dr - b.dr, a.dt - b.dt,
          a.drr - b.drr, a.drt - b.drt, a.dtt - b.dtt};
}
constexpr Jet2x2 operator*(const Jet2x2& a, const Jet2x2& b) {
  return {a.v * b.v,
          a.dr * b.v + a.v * b.dr,
          a.dt * b.v + a.v * b.dt,
          a.drr * b.v + 2.0 * a.dr * b.dr + a.v * b.drr,
          a.drt * b.v + a.dr * b.dt + a.dt * b.dr + a.v * b.drt,
          a.dtt * b.v + 2.0 * a.dt * b.dt + a.v * b.dtt};
}
constexpr Jet2x2 operator*(double s, const Jet2x2& a) {
  return {s * a.v, s * a.dr, s * a.dt, s * a.drr, s * a.drt, s * a.dtt};
}
constexpr Jet2x2 operator*(const Jet2x2& a, double s) { return s * a; }

// univariate f at u.v composed with the two-variable inner jet u
constexpr Jet2x2 compose(const Jet2& f, const Jet2x2& u) {
  return {f.v,
          f.d1 * u.dr,
          f.d1 * u.dt,
          f.d2 * u.dr * u.dr + f.d1 * u.drr,
          f.d2 * u.dr * u.dt + f.d1 * u.drt,
          f.d2 * u.dt * u.dt + f.d1 * u.dtt};
}

inline Jet2x2 exp(const Jet2x2& u) {
  const double e = std::exp(u.v);
  return compose({e, e, e}, u);
}
inline Jet2x2 sqr(const Jet2x2& u) { return u * u; }

}  // namespace pinchlab
