#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

// Gauss-Legendre quadrature. Two entry points:
//   integrate_fixed    — composite rule with a bounded panel width; the panel
//                        layout depends only on the interval, so results vary
//                        smoothly with endpoint parameters (safe to finite-
//                        difference through).
//   integrate_adaptive — bisection-refined rule with an abs+rel tolerance.
// Both assume the integrand is smooth inside each panel; callers split at
// known kinks via the breakpoint overloads.

namespace pinchlab {

namespace detail {

inline const std::array<double, 40>& gauss20_nodes_weights() {
  // nodes in [0], ..., [19]; weights in [20], ..., [39]; rule on [-1, 1]
  static const std::array<double, 40> table = [] {
    std::array<double, 40> t{};
    constexpr int n = 20;
    for (int i = 0; i < n; ++i) {
      // Newton iteration on P_n from the Chebyshev initial guess
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      t[i] = x;
      t[n + i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return t;
  }();
  return table;
}

template <class F>
double gauss20_panel(F&& f, double a, double b) {
  const auto& t = gauss20_nodes_weights();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 20; ++i) s += t[20 + i] * f(mid + half * t[i]);
  return s * half;
}

template <class F>
double adaptive_rec(F&& f, double a, double b, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss20_panel(f, a, m);
  const double right = gauss20_panel(f, m, b);
  const double refined = left + right;
  if (std::abs(refined - whole) <= tol || depth > 48) {
    if (depth > 48 && std::abs(refined - whole) > 1e6 * tol)
      throw std::domain_error("adaptive quadrature failed to converge");
    return refined;
  }
  return adaptive_rec(f, a, m, left, 0.5 * tol, depth + 1) +
         adaptive_rec(f, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

template <class F>
double integrate_fixed(F&& f, double a, double b, double max_panel = 0.125) {
  if (!(b > a)) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
  const double w = (b - a) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i)
    s += detail::gauss20_panel(f, a + i * w, a + (i + 1) * w);
  return s;
}

template <class F>
double integrate_adaptive(F&& f, double a, double b, double tol = 1e-11) {
  if (!(b > a)) return 0.0;
  const double whole = detail::gauss20_panel(f, a, b);
  const double scale = std::max(1.0, std::abs(whole));
  return detail::adaptive_rec(f, a, b, whole, tol * scale, 0);
}

// integrate over [a, b] splitting at the (sorted or unsorted) interior points
template <class F>
double integrate_adaptive_split(F&& f, double a, double b,
                                const std::vector<double>& splits,
                                double tol = 1e-11) {
  std::vector<double> pts{a};
  for (double s : splits)
    if (s > a && s < b) pts.push_back(s);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate_adaptive(f, pts[i], pts[i + 1], tol);
  return total;
}

template <class F>
double integrate_fixed_split(F&& f, double a, double b,
                             const std::vector<double>& splits,
                             double max_panel = 0.125) {
  std::vector<double> pts{a};
  for (double s : splits)
    if (s > a && s < b) pts.push_back(s);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate_fixed(f, pts[i], pts[i + 1], max_panel);
  return total;
}

}  // namespace pinchlab
