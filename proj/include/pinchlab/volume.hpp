#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pinchlab/curves.hpp"
#include "pinchlab/quadrature.hpp"

// Volumes of the cusp regions, per unit torus (and reference-fiber) volume.
// The region integrals reduce to a single adaptive quadrature in r: for
// r <= -1 every coefficient is in closed form and the inner t-integral either
// has a closed antiderivative or is a fixed r-independent band integral.
// Truncation tails use the same per-region caps the closed-form bounds come
// from, so bound checks stay conservative.

namespace pinchlab {

struct VolumeResult {
  double value = 0.0;          // quadrature over [truncation_r, upper limit]
  double tail_estimate = 0.0;  // cap on the part below truncation_r
  double bound = std::numeric_limits<double>::infinity();
  double truncation_r = 0.0;
  double margin = 0.0;  // bound - value - tail
  bool passed = false;
  double decay_rate = 0.0;  // fitted slice decay exponent (finiteness checks)
};

namespace detail {

// int_{-1}^{1} soft_exp(u)^m du, the r-independent band part of the
// t-integral
inline double band_mass(int m) {
  return integrate_adaptive(
      [&](double u) { return std::pow(CoreCurves::get().soft_exp(u).v, m); },
      -1.0, 1.0, 1e-13);
}

inline bool strict_pos(double margin, double scale) {
  return margin > 1e-12 * std::max(1.0, std::abs(scale));
}

}  // namespace detail

// region r in (-inf, -1], t in [r-1, 2], unit tori; cap
// 2^{l+m+1} b^{l+m} c^m e^{-l} (e^{2m}/l + 2/(l+m))
inline VolumeResult volume_family1(int l, int m, double b, double r_min = -30.0) {
  if (l < 0 || m < 0 || l + m < 1) throw std::invalid_argument("need l + m >= 1");
  if (!(r_min <= -1.0)) throw std::invalid_argument("need r_min <= -1");
  const double c = conv_const_c();
  const double band = detail::band_mass(m);
  auto slice = [&](double r) {
    const double h = 1.0 + std::exp(r);
    const double exp_part =
        std::pow(c, m) * (std::exp(m * (2.0 - r)) - std::exp(static_cast<double>(m))) / m;
    return std::pow(h, 1 + l + m) * std::pow(b, l + m) *
           std::exp((l + m) * r) * (band + exp_part);
  };
  VolumeResult out;
  out.truncation_r = r_min;
  out.value = integrate_adaptive(slice, r_min, -1.0, 1e-12);
  const double blm = std::pow(b, l + m), cm = std::pow(c, m);
  out.tail_estimate =
      std::pow(2.0, l + m + 1) * blm * cm * std::exp(2.0 * m) * std::exp(l * r_min) / l +
      std::pow(2.0, l + m + 2) * blm * cm * std::exp(static_cast<double>(m)) *
          std::exp((l + m) * r_min) / (l + m);
  out.bound = std::pow(2.0, l + m + 1) * blm * cm * std::exp(-static_cast<double>(l)) *
              (std::exp(2.0 * m) / l + 2.0 / (l + m));
  out.margin = out.bound - out.value - out.tail_estimate;
  out.passed = detail::strict_pos(out.margin, out.bound);
  out.decay_rate = std::log(slice(-5.0) / slice(-6.0));
  return out;
}

// int_{-inf}^{0} profile(r)^3 b e^{ramp(r)-2} L dr  vs  8 e b L.
// Below r = -1 the integrand is (1+e^r)^3 b L e^{r-2}, which has the exact
// antiderivative b L e^{-2} (1+e^r)^4 / 4.
inline VolumeResult piece_volume_factor(double L, double b) {
  if (!(L > 0.0) || !(b > 0.0)) throw std::invalid_argument("need L, b > 0");
  VolumeResult out;
  out.truncation_r = -1.0;  // analytic below; nothing is dropped
  const double closed =
      b * L * std::exp(-2.0) * (std::pow(1.0 + std::exp(-1.0), 4) - 1.0) / 4.0;
  const double upper = integrate_adaptive(
      [&](double r) {
        const double h = CoreCurves::get().cusp_profile(r).v;
        return h * h * h * b * L * std::exp(r - 2.0);
      },
      -1.0, 0.0, 1e-12);
  out.value = closed + upper;
  out.tail_estimate = 0.0;
  out.bound = 8.0 * std::exp(1.0) * b * L;
  out.margin = out.bound - out.value;
  out.passed = detail::strict_pos(out.margin, out.bound);
  return out;
}

// int_{-inf}^{0} profile(r)^{n+1} b e^{ramp(r)-2} L dr  vs  2^{n+1} e^{n-1} b L
inline VolumeResult piece_volume_factor2(int n, double L, double b) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (!(L > 0.0) || !(b > 0.0)) throw std::invalid_argument("need L, b > 0");
  VolumeResult out;
  out.truncation_r = -1.0;
  const double closed = b * L * std::exp(-2.0) *
                        (std::pow(1.0 + std::exp(-1.0), n + 2) - 1.0) / (n + 2);
  const double upper = integrate_adaptive(
      [&](double r) {
        const double h = CoreCurves::get().cusp_profile(r).v;
        return std::pow(h, n + 1) * b * L * std::exp(r - 2.0);
      },
      -1.0, 0.0, 1e-12);
  out.value = closed + upper;
  out.bound = std::pow(2.0, n + 1) * std::exp(n - 1.0) * b * L;
  out.margin = out.bound - out.value;
  out.passed = detail::strict_pos(out.margin, out.bound);
  return out;
}

// family-2 region r in (-inf, -1], t in [r-1, 2], circles of lengths c1, c2,
// unit reference fiber volume. Finiteness check: the slice integral decays
// geometrically; the fitted rate is reported.
inline VolumeResult volume_family2(int n, double a, double c1, double c2,
                                   double r_min = -30.0) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  if (!(r_min <= -1.0)) throw std::invalid_argument("need r_min <= -1");
  const double b = b_of_a(a);
  const double c = conv_const_c();
  const double band = detail::band_mass(1);
  auto slice = [&](double r) {
    const double h = 1.0 + std::exp(r);
    const double exp_part = c * (std::exp(2.0 - r) - std::exp(1.0));
    return c1 * c2 * b * b * std::exp(2.0 * r) * std::pow(h, n + 1) *
           (band + exp_part);
  };
  VolumeResult out;
  out.truncation_r = r_min;
  out.value = integrate_adaptive(slice, r_min, -1.0, 1e-12);
  out.tail_estimate = c1 * c2 * std::pow(2.0, n + 1) * b * b *
                      (band * std::exp(2.0 * r_min) / 2.0 +
                       c * std::exp(2.0) * std::exp(r_min));
  out.decay_rate = std::log(slice(-5.0) / slice(-6.0));
  out.margin = std::numeric_limits<double>::infinity();
  out.passed = std::isfinite(out.value) && out.decay_rate > 0.0;
  return out;
}

}  // namespace pinchlab
