#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "pinchlab/jet.hpp"
#include "pinchlab/quadrature.hpp"

namespace pinchlab {

// The standard even bump K*exp(-1/(1-x^2)) on (-1,1), zero outside, with K
// fixed so the total mass is 1. Evaluation goes through |x| so evenness is
// bit-exact.
class Mollifier {
 public:
  Mollifier()
      : norm_(1.0 / integrate_adaptive(
                        [](double x) { return std::exp(-1.0 / (1.0 - x * x)); },
                        -1.0, 1.0, 1e-15)) {}

  double operator()(double x) const { return jets(x).v; }

  Jet2 jets(double x) const {
    const double ax = std::abs(x);
    if (ax >= 1.0) return {0.0, 0.0, 0.0};
    const double t = 1.0 - ax * ax;
    const double lam = norm_ * std::exp(-1.0 / t);
    if (lam == 0.0) return {0.0, 0.0, 0.0};
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
    const double x2 = ax * ax;
    const double d1 = lam * (-2.0 * ax / t2);
    const double d2 = lam * (4.0 * x2 / t4 - 2.0 * (1.0 + 3.0 * x2) / t3);
    return {lam, x < 0.0 ? -d1 : d1, d2};
  }

  double norm_constant() const { return norm_; }

 private:
  double norm_;
};

// Piecewise-smooth function with a distributional second derivative: smooth
// pieces of phi, phi', phi'' between breakpoints, plus Dirac atoms of phi''.
struct PiecewisePhi {
  std::vector<double> breaks;                          // interior kink locations
  std::function<double(double, int)> piece;            // phi^(order)(s), order 0..2
  std::vector<std::pair<double, double>> d2_atoms;     // (location, mass) in phi''
};

// (lambda * phi)(x) together with (lambda * phi')(x) and (lambda * phi'')(x),
// integrating over the support window [x-1, x+1] and splitting panels at the
// breakpoints. Atom terms contribute mass * lambda(x - location).
inline Jet2 convolve(const Mollifier& lam, const PiecewisePhi& phi, double x) {
  Jet2 out{};
  double* slot[3] = {&out.v, &out.d1, &out.d2};
  for (int order = 0; order < 3; ++order) {
    *slot[order] = integrate_fixed_split(
        [&](double t) { return phi.piece(t, order) * lam(x - t); }, x - 1.0,
        x + 1.0, phi.breaks);
  }
  for (const auto& [loc, mass] : phi.d2_atoms) out.d2 += mass * lam(x - loc);
  return out;
}

}  // namespace pinchlab
