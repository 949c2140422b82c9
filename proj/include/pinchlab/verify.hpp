#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "pinchlab/curvature.hpp"
#include "pinchlab/curves.hpp"
#include "pinchlab/metrics.hpp"
#include "pinchlab/volume.hpp"

// Executable checkers: every asserted inequality is evaluated in the stated
// arithmetic form on a grid, with a strictness floor so that "x < y" passes
// only when y - x clears 1e-12 of the local scale, while ties on non-strict
// inequalities pass. Each report carries the worst normalized margin and the
// point where it happened.

namespace pinchlab {

struct CheckReport {
  std::string name;
  bool passed = false;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> witness;
  std::string note;
  long samples = 0;
};

inline bool strictly_less(double x, double y) {
  return y - x > 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}
inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)});
}

namespace detail {

class CheckAcc {
 public:
  explicit CheckAcc(std::string name) { rep_.name = std::move(name); }

  void strict_less(double lhs, double rhs, const double* pt, int np) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    record((rhs - lhs) / scale, rhs - lhs > 1e-12 * scale, pt, np);
  }
  void nonstrict_le(double lhs, double rhs, const double* pt, int np) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    record((rhs - lhs) / scale, rhs - lhs >= -1e-12 * scale, pt, np);
  }
  void close_rel(double got, double want, double tol, const double* pt, int np) {
    const double err = rel_err(got, want);
    record(tol - err, err <= tol, pt, np);
  }
  void set_note(std::string note) { rep_.note = std::move(note); }

  CheckReport take() {
    rep_.passed = ok_ && rep_.samples > 0;
    return std::move(rep_);
  }

 private:
  void record(double margin, bool ok, const double* pt, int np) {
    rep_.samples++;
    ok_ = ok_ && ok;
    if (margin < rep_.worst_margin) {
      rep_.worst_margin = margin;
      rep_.witness.assign(pt, pt + np);
    }
  }
  CheckReport rep_;
  bool ok_ = true;
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace detail

struct GridSpec {
  double r_lo = -10.0, r_hi = 10.0, t_lo = -10.0, t_hi = 10.0;
  int nr = 256, nt = 256;
};

// f' <= f and f' <= f'' on a grid over [-5, 5]
inline CheckReport check_lemma_f(int count = 256) {
  detail::CheckAcc acc("lemma_f");
  const CoreCurves& core = CoreCurves::get();
  for (double s : detail::linspace(-5.0, 5.0, count)) {
    const Jet2 f = core.soft_exp(s);
    acc.nonstrict_le(f.d1, f.v, &s, 1);
    acc.nonstrict_le(f.d1, f.d2, &s, 1);
  }
  return acc.take();
}

// positivity and boundedness of the family-1 building blocks
inline std::vector<CheckReport> check_lemma_key(const GridSpec& grid, double b = 1.0) {
  const CoreCurves& core = CoreCurves::get();
  const double c = core.c();
  std::vector<CheckReport> out;

  detail::CheckAcc h_acc("lemma_key.profile");
  detail::CheckAcc H_acc("lemma_key.rho_scale");
  detail::CheckAcc H2_acc("lemma_key.rho_scale_two_case");
  detail::CheckAcc F_acc("lemma_key.warp_signs");
  detail::CheckAcc Fr_acc("lemma_key.warp_r_identity");
  detail::CheckAcc ratio_acc("lemma_key.ratio_suprema");

  const WarpFactor F(b);
  double sup[10] = {0};
  const char* names[10] = {"f'/f",  "f''/f", "h'/h",  "h''/h", "H'/H",
                           "H''/H", "Fr/F",  "Frr/F", "Ft/F",  "Ftt/F"};
  for (double r : detail::linspace(grid.r_lo, grid.r_hi, grid.nr)) {
    const Jet2 h = core.cusp_profile(r);
    const Jet2 R = core.ramp(r);
    const Jet2 H = b * (exp(R) * h);
    h_acc.nonstrict_le(1.0, h.v, &r, 1);
    h_acc.strict_less(0.0, h.d1, &r, 1);
    h_acc.strict_less(0.0, h.d2, &r, 1);
    H_acc.strict_less(0.0, H.v, &r, 1);
    H_acc.strict_less(0.0, H.d1, &r, 1);
    H_acc.strict_less(0.0, H.d2, &r, 1);
    // H'' > 0 via h R'' + h'' > 0; for r > 1 it is bounded below by e^r
    h_acc.strict_less(0.0, h.v * R.d2 + h.d2, &r, 1);
    if (r > 1.0)
      H2_acc.nonstrict_le(std::exp(r), h.v * R.d2 + h.d2, &r, 1);
    sup[2] = std::max(sup[2], std::abs(h.d1 / h.v));
    sup[3] = std::max(sup[3], std::abs(h.d2 / h.v));
    sup[4] = std::max(sup[4], std::abs(H.d1 / H.v));
    sup[5] = std::max(sup[5], std::abs(H.d2 / H.v));
    for (double t : detail::linspace(grid.t_lo, grid.t_hi, grid.nt)) {
      const double pt[2] = {r, t};
      const Jet2x2 Fj = F(r, t);
      F_acc.strict_less(0.0, Fj.v, pt, 2);
      F_acc.nonstrict_le(0.0, Fj.dt, pt, 2);
      F_acc.nonstrict_le(0.0, Fj.dtt, pt, 2);
      F_acc.nonstrict_le(0.0, Fj.dr, pt, 2);
      const Jet2 f = core.soft_exp(t - R.v);
      Fr_acc.close_rel(Fj.dr, b * R.d1 * std::exp(R.v) * (f.v - f.d1), 1e-9, pt, 2);
      sup[0] = std::max(sup[0], std::abs(f.d1 / f.v));
      sup[1] = std::max(sup[1], std::abs(f.d2 / f.v));
      sup[6] = std::max(sup[6], std::abs(Fj.dr / Fj.v));
      sup[7] = std::max(sup[7], std::abs(Fj.drr / Fj.v));
      sup[8] = std::max(sup[8], std::abs(Fj.dt / Fj.v));
      sup[9] = std::max(sup[9], std::abs(Fj.dtt / Fj.v));
    }
  }
  {
    std::string note;
    for (int i = 0; i < 10; ++i) {
      bool finite = std::isfinite(sup[i]);
      const double origin[2] = {0, 0};
      ratio_acc.nonstrict_le(finite ? 0.0 : 1.0, 0.0, origin, 2);
      note += std::string(names[i]) + "=" + std::to_string(sup[i]) + (i < 9 ? " " : "");
    }
    // the one crude closed-form cap: f''/f stays below c e^2
    const double origin[2] = {0, 0};
    ratio_acc.nonstrict_le(sup[1], c * std::exp(2.0), origin, 2);
    ratio_acc.set_note(note);
  }
  out.push_back(h_acc.take());
  out.push_back(H_acc.take());
  out.push_back(H2_acc.take());
  out.push_back(F_acc.take());
  out.push_back(Fr_acc.take());
  out.push_back(ratio_acc.take());
  return out;
}

// family-2 building blocks: capped warp and cosh cap signs plus ratio bounds
inline std::vector<CheckReport> check_lemma_key2(const GridSpec& grid, double a) {
  std::vector<CheckReport> out;
  const CappedWarpFactor F(a);
  const CoshCap T(a);

  detail::CheckAcc F_acc("lemma_key2.capped_warp_signs");
  detail::CheckAcc Fr_acc("lemma_key2.capped_warp_r_independence");
  detail::CheckAcc T_acc("lemma_key2.cosh_cap_signs");
  detail::CheckAcc ratio_acc("lemma_key2.ratio_suprema");
  double sup[6] = {0};
  const char* names[6] = {"Fr/F", "Frr/F", "Ft/F", "Ftt/F", "T'/T", "T''/T"};
  for (double r : detail::linspace(grid.r_lo, grid.r_hi, grid.nr)) {
    for (double t : detail::linspace(grid.t_lo, grid.t_hi, grid.nt)) {
      const double pt[2] = {r, t};
      const Jet2x2 Fj = F(r, t);
      F_acc.strict_less(0.0, Fj.v, pt, 2);
      F_acc.nonstrict_le(0.0, Fj.dt, pt, 2);
      F_acc.nonstrict_le(0.0, Fj.dtt, pt, 2);
      F_acc.nonstrict_le(0.0, Fj.dr, pt, 2);
      if (t >= 4.0 || r >= 5.0) {
        Fr_acc.nonstrict_le(std::abs(Fj.dr), 1e-12 * std::max(1.0, Fj.v), pt, 2);
        Fr_acc.nonstrict_le(std::abs(Fj.drr), 1e-12 * std::max(1.0, Fj.v), pt, 2);
      }
      sup[0] = std::max(sup[0], std::abs(Fj.dr / Fj.v));
      sup[1] = std::max(sup[1], std::abs(Fj.drr / Fj.v));
      sup[2] = std::max(sup[2], std::abs(Fj.dt / Fj.v));
      sup[3] = std::max(sup[3], std::abs(Fj.dtt / Fj.v));
    }
  }
  for (double t : detail::linspace(grid.t_lo, grid.t_hi, grid.nt)) {
    const Jet2 Tj = T(t);
    T_acc.nonstrict_le(1.0, Tj.v, &t, 1);
    T_acc.nonstrict_le(0.0, Tj.d1, &t, 1);
    T_acc.nonstrict_le(0.0, Tj.d2, &t, 1);
    sup[4] = std::max(sup[4], std::abs(Tj.d1 / Tj.v));
    sup[5] = std::max(sup[5], std::abs(Tj.d2 / Tj.v));
  }
  {
    std::string note;
    const double origin[2] = {0, 0};
    for (int i = 0; i < 6; ++i) {
      ratio_acc.nonstrict_le(std::isfinite(sup[i]) ? 0.0 : 1.0, 0.0, origin, 2);
      note += std::string(names[i]) + "=" + std::to_string(sup[i]) + (i < 5 ? " " : "");
    }
    ratio_acc.set_note(note);
  }
  out.push_back(F_acc.take());
  out.push_back(Fr_acc.take());
  out.push_back(T_acc.take());
  out.push_back(ratio_acc.take());
  return out;
}

// coordinate sectional curvatures: negative, bounded below; the tau-column
// value agrees with -phi/(f h) and phi/h >= f/2 for r >= 1
inline std::vector<CheckReport> check_lemma_Kij(const GridSpec& grid,
                                                const DiagonalMetric& g) {
  const bool fam2 = g.tag == FamilyTag::family2;
  const std::string prefix = fam2 ? "lemma_Kij2" : "lemma_Kij";
  detail::CheckAcc neg_acc(prefix + ".negativity");
  detail::CheckAcc phi_acc(prefix + ".phi_identity");
  detail::CheckAcc bound_acc(prefix + ".phi_lower_bound");
  detail::CheckAcc warped_acc(prefix + ".warped_column");

  const CoreCurves& core = CoreCurves::get();
  const bool has_tau = fam2 || g.m > 0;
  double sampled_c = 0.0;
  std::array<double, kMaxDim> x{};
  for (double r : detail::linspace(grid.r_lo, grid.r_hi, grid.nr)) {
    for (double t : detail::linspace(grid.t_lo, grid.t_hi, grid.nt)) {
      x[0] = r;
      x[1] = t;
      const auto K = sectional_coordinate(g, x.data());
      for (int i = 0; i < g.dim; ++i)
        for (int j = i + 1; j < g.dim; ++j) {
          neg_acc.strict_less(K[i][j], 0.0, x.data(), 2);
          sampled_c = std::min(sampled_c, K[i][j]);
        }
      if (!has_tau) continue;
      const Jet2 h = core.cusp_profile(r);
      const Jet2 R = core.ramp(r);
      const Jet2 f = core.soft_exp(t - R.v);
      const double phi = h.v * R.d1 * R.d1 * (f.v - 2.0 * f.d1 + f.d2) +
                         h.v * R.d2 * (f.v - f.d1) +
                         2.0 * R.d1 * h.d1 * (f.v - f.d1) + h.d2 * f.v;
      const int jtau = fam2 ? 3 : 2 + g.l;
      if (!fam2 || t <= 4.0)
        phi_acc.close_rel(K[0][jtau], -phi / (f.v * h.v), 1e-9, x.data(), 2);
      if (r >= 1.0 && (!fam2 || t <= 4.0))
        bound_acc.nonstrict_le(0.5 * f.v, phi / h.v, x.data(), 2);
      if (fam2 && (t >= 4.0 || r >= 5.0))
        warped_acc.close_rel(K[0][jtau], -h.d2 / h.v, 1e-9, x.data(), 2);
    }
  }
  neg_acc.set_note("sampled_min_K=" + std::to_string(sampled_c));
  std::vector<CheckReport> out;
  out.push_back(neg_acc.take());
  if (has_tau) {
    out.push_back(phi_acc.take());
    out.push_back(bound_acc.take());
  }
  if (fam2) out.push_back(warped_acc.take());
  return out;
}

// determinant inequality (R_{0jj1})^2 < R_{0jj0'} R_{1jj1'} on the closed
// tables, for every mixed column j
inline CheckReport check_eqR(const GridSpec& grid, const DiagonalMetric& g) {
  detail::CheckAcc acc(g.tag == FamilyTag::family2 ? "eq_R2.determinant"
                                                   : "eq_R.determinant");
  std::array<double, kMaxDim> x{};
  for (double r : detail::linspace(grid.r_lo, grid.r_hi, grid.nr)) {
    for (double t : detail::linspace(grid.t_lo, grid.t_hi, grid.nt)) {
      x[0] = r;
      x[1] = t;
      const SparseCurvature sp = riemann_closed(g, x.data());
      for (int j = 0; j < g.dim; ++j) {
        if (!sp.has_mixed[j]) continue;
        acc.strict_less(sp.mixed[j] * sp.mixed[j],
                        sp.ijji[0][j] * sp.ijji[1][j], x.data(), 2);
      }
    }
  }
  return acc.take();
}

// the expanded r > 1 inequality behind the determinant bound, in the exact
// displayed arithmetic form
inline CheckReport check_eqRR(int nr = 256, int nt = 256) {
  detail::CheckAcc acc("eq_RR.expanded");
  const CoreCurves& core = CoreCurves::get();
  for (int i = 1; i <= nr; ++i) {
    const double r = 1.0 + 7.0 * i / nr;  // (1, 8]
    const Jet2 R = core.ramp(r);
    for (double t : detail::linspace(-5.0, 8.0, nt)) {
      const double pt[2] = {r, t};
      const Jet2 f = core.soft_exp(t - R.v);
      const double lhs =
          R.d1 * R.d1 * (f.d2 - f.d1) * (f.d2 - f.d1);
      const double bracket1 = f.v + (R.d2 + R.d1 * R.d1) * (f.v - f.d1) +
                              R.d1 * R.d1 * (f.d2 - f.d1) +
                              2.0 * R.d1 * (f.v - f.d1);
      const double e2r = 4.0 * std::exp(2.0 * r);
      const double bracket2 = e2r * (f.v - f.d1) + e2r * f.v + f.d2;
      acc.strict_less(lhs, bracket1 * bracket2, pt, 2);
    }
  }
  return acc.take();
}

// the mixed-term bound h ramp' (f''-f') / (2 f) is bounded: its factors have
// disjoint escapes (profile grows only where ramp' = 0, and f''-f' is the
// compactly supported bump), so the product stays under e^5 * bump(0)
inline CheckReport check_mixed_term_bound(const GridSpec& grid) {
  detail::CheckAcc acc("curvature.mixed_term_bound");
  const CoreCurves& core = CoreCurves::get();
  double sup = 0.0;
  const double cap =
      std::exp(5.0) * core.bump()(0.0);
  for (double r : detail::linspace(grid.r_lo, grid.r_hi, grid.nr))
    for (double t : detail::linspace(grid.t_lo, grid.t_hi, grid.nt)) {
      const double pt[2] = {r, t};
      const Jet2 h = core.cusp_profile(r);
      const Jet2 R = core.ramp(r);
      const Jet2 f = core.soft_exp(t - R.v);
      const double val = h.v * R.d1 * (f.d2 - f.d1) / (2.0 * f.v);
      sup = std::max(sup, val);
      acc.nonstrict_le(val, cap, pt, 2);
    }
  acc.set_note("sup=" + std::to_string(sup) + " cap=" + std::to_string(cap));
  return acc.take();
}

struct VerifyOptions {
  GridSpec grid;
  int scan_grid = 64;
  int planes_per_point = 32;
  std::uint64_t seed = 20240801;
  double r_min = -30.0;
  int threads = 1;
  int region_grid = 64;  // resolution for the regional form checks
};

namespace detail {

inline CheckReport region_check(
    const std::string& name, const DiagonalMetric& g, const GridSpec& grid,
    int count, const std::function<bool(double, double)>& inside,
    const std::function<void(CheckAcc&, const double*, const CoeffList&)>& body) {
  CheckAcc acc(name);
  std::array<double, kMaxDim> x{};
  for (double r : linspace(grid.r_lo, grid.r_hi, count))
    for (double t : linspace(grid.t_lo, grid.t_hi, count)) {
      if (!inside(r, t)) continue;
      x[0] = r;
      x[1] = t;
      const CoeffList c = g.coefficients(x.data());
      body(acc, x.data(), c);
    }
  return acc.take();
}

inline CheckReport rotation_invariance(const std::string& name,
                                       const DiagonalMetric& g) {
  CheckAcc acc(name);
  std::array<double, kMaxDim> x{}, y{};
  const double probes[4][2] = {{-3.0, -4.0}, {0.5, 0.5}, {2.0, 6.0}, {7.0, 1.0}};
  for (const auto& p : probes) {
    x.fill(0.0);
    x[0] = p[0];
    x[1] = p[1];
    y = x;
    for (int i = 0; i < g.dim; ++i)
      if (g.roles[i] == Role::rho || g.roles[i] == Role::tau ||
          g.roles[i] == Role::wj)
        y[i] = x[i] + 0.37 + i;
    const CoeffList a = g.coefficients(x.data());
    const CoeffList b = g.coefficients(y.data());
    bool same = true;
    for (int i = 0; i < g.dim; ++i) {
      same = same && a[i].g == b[i].g;
      for (int k = 0; k < g.dim; ++k) {
        same = same && a[i].d1[k] == b[i].d1[k];
        for (int l = 0; l < g.dim; ++l) same = same && a[i].d2[k][l] == b[i].d2[k][l];
      }
    }
    acc.nonstrict_le(same ? 0.0 : 1.0, 0.0, x.data(), 2);
  }
  return acc.take();
}

}  // namespace detail

// items of the family-1 estimate: pinching, finite volume, the three regional
// closed forms, the eventual warped form, fiber non-positivity, rotational
// invariance
inline std::vector<CheckReport> check_prop_estimate(int l, int m, double b,
                                                    const VerifyOptions& opt) {
  std::vector<CheckReport> out;
  const DiagonalMetric g = family1_metric(l, m, b);
  const DiagonalMetric hat = hat_metric_family1(l, m, b);
  const double c = conv_const_c();

  {  // (1) pinching
    detail::CheckAcc acc("prop_estimate.pinching");
    const PinchReport rep = pinch_scan(g, default_scan_box(g, opt.scan_grid),
                                       opt.planes_per_point, opt.seed, opt.threads);
    const double origin[2] = {0, 0};
    acc.strict_less(rep.max_k, 0.0, rep.max_point.empty() ? origin : rep.max_point.data(),
                    g.dim);
    acc.set_note("min_K=" + std::to_string(rep.min_k) +
                 " max_K=" + std::to_string(rep.max_k) +
                 " samples=" + std::to_string(rep.samples));
    out.push_back(acc.take());
  }
  {  // (2) finite volume with the closed-form cap
    detail::CheckAcc acc("prop_estimate.volume");
    const VolumeResult vr = volume_family1(l, m, b, opt.r_min);
    const double pt[1] = {vr.truncation_r};
    acc.strict_less(vr.value + vr.tail_estimate, vr.bound, pt, 1);
    acc.set_note("value=" + std::to_string(vr.value) +
                 " tail=" + std::to_string(vr.tail_estimate) +
                 " bound=" + std::to_string(vr.bound));
    out.push_back(acc.take());
  }
  const CoreCurves& core = CoreCurves::get();
  // (3) r <= 0, t <= r-1: dr^2 + h^2(dt^2 + b^2 e^{2r}(drho^2 + dtau^2))
  out.push_back(detail::region_check(
      "prop_estimate.region_flat_low", g, opt.grid, opt.region_grid,
      [](double r, double t) { return r <= 0.0 && t <= r - 1.0; },
      [&](detail::CheckAcc& acc, const double* x, const CoeffList& cf) {
        const double hh = core.cusp_profile(x[0]).v;
        const double want = hh * hh * b * b * std::exp(2.0 * x[0]);
        for (int i = 2; i < g.dim; ++i) acc.close_rel(cf[i].g, want, 1e-10, x, 2);
        acc.close_rel(cf[1].g, hh * hh, 1e-10, x, 2);
      }));
  // (4) r >= 0, t <= -1: dr^2 + h^2(dt^2 + b^2 e^{2 ramp}(drho^2 + dtau^2))
  out.push_back(detail::region_check(
      "prop_estimate.region_flat_high", g, opt.grid, opt.region_grid,
      [](double r, double t) { return r >= 0.0 && t <= -1.0; },
      [&](detail::CheckAcc& acc, const double* x, const CoeffList& cf) {
        const double hh = core.cusp_profile(x[0]).v;
        const double want =
            hh * hh * b * b * std::exp(2.0 * core.ramp(x[0]).v);
        for (int i = 2; i < g.dim; ++i) acc.close_rel(cf[i].g, want, 1e-10, x, 2);
      }));
  // (5) t >= 4: tau coefficient h^2 b^2 c^2 e^{2t}
  out.push_back(detail::region_check(
      "prop_estimate.region_hyperbolic", g, opt.grid, opt.region_grid,
      [](double, double t) { return t >= 4.0; },
      [&](detail::CheckAcc& acc, const double* x, const CoeffList& cf) {
        const double hh = core.cusp_profile(x[0]).v;
        const double want = hh * hh * b * b * c * c * std::exp(2.0 * x[1]);
        for (int i = 2 + l; i < g.dim; ++i) acc.close_rel(cf[i].g, want, 1e-10, x, 2);
      }));
  // (6) r >= 5: g = dr^2 + 4 e^{2r} ghat
  out.push_back(detail::region_check(
      "prop_estimate.warped_form", g, opt.grid, opt.region_grid,
      [](double r, double) { return r >= 5.0; },
      [&](detail::CheckAcc& acc, const double* x, const CoeffList& cf) {
        std::array<double, kMaxDim> y{};
        for (int i = 1; i < g.dim; ++i) y[i - 1] = x[i];
        const CoeffList hc = hat.coefficients(y.data());
        const double wf = 4.0 * std::exp(2.0 * x[0]);
        for (int i = 1; i < g.dim; ++i)
          acc.close_rel(cf[i].g / (wf * hc[i - 1].g), 1.0, 1e-10, x, 2);
      }));
  {  // (7) fiber metric non-positive
    detail::CheckAcc acc("prop_estimate.hat_nonpositive");
    const PinchReport rep =
        pinch_scan(hat, default_scan_box(hat, opt.scan_grid),
                   opt.planes_per_point, opt.seed, opt.threads);
    const double origin[1] = {0};
    acc.nonstrict_le(rep.max_k, 1e-12,
                     rep.max_point.empty() ? origin : rep.max_point.data(), hat.dim);
    acc.set_note("max_K=" + std::to_string(rep.max_k));
    out.push_back(acc.take());
  }
  out.push_back(detail::rotation_invariance("prop_estimate.rotation_invariance", g));
  return out;
}

// items of the family-2 estimate
inline std::vector<CheckReport> check_prop_estimate2(int n, double a,
                                                     const VerifyOptions& opt) {
  std::vector<CheckReport> out;
  const DiagonalMetric g = family2_metric(n, a);
  const DiagonalMetric hat = hat_metric_family2(n, a);
  const double b = g.b;
  const CoreCurves& core = CoreCurves::get();

  {
    detail::CheckAcc acc("prop_estimate2.pinching");
    const PinchReport rep = pinch_scan(g, default_scan_box(g, opt.scan_grid),
                                       opt.planes_per_point, opt.seed, opt.threads);
    const double origin[2] = {0, 0};
    acc.strict_less(rep.max_k, 0.0,
                    rep.max_point.empty() ? origin : rep.max_point.data(), g.dim);
    acc.set_note("min_K=" + std::to_string(rep.min_k) +
                 " max_K=" + std::to_string(rep.max_k));
    out.push_back(acc.take());
  }
  {
    detail::CheckAcc acc("prop_estimate2.volume_finite");
    const VolumeResult vr = volume_family2(n, a, g.c1, g.c2, opt.r_min);
    const double pt[1] = {vr.truncation_r};
    acc.strict_less(0.0, vr.decay_rate, pt, 1);
    acc.nonstrict_le(std::isfinite(vr.value) ? 0.0 : 1.0, 0.0, pt, 1);
    acc.set_note("value=" + std::to_string(vr.value) +
                 " decay_rate=" + std::to_string(vr.decay_rate));
    out.push_back(acc.take());
  }
  // (3)/(4): below t = -1 the tau coefficient flattens to b^2 e^{2 ramp} h^2
  // and the fiber block is h^2 (dw^2 + sum e^{2w} dw_j^2)
  out.push_back(detail::region_check(
      "prop_estimate2.region_flat", g, opt.grid, opt.region_grid,
      [](double, double t) { return t <= -1.0; },
      [&](detail::CheckAcc& acc, const double* x, const CoeffList& cf) {
        const double hh = core.cusp_profile(x[0]).v;
        const double want =
            hh * hh * b * b * std::exp(2.0 * core.ramp(x[0]).v);
        acc.close_rel(cf[3].g, want, 1e-10, x, 2);
        if (g.dim > 4) acc.close_rel(cf[4].g, hh * hh, 1e-10, x, 2);
        for (int i = 5; i < g.dim; ++i)
          acc.close_rel(cf[i].g, hh * hh * std::exp(2.0 * x[4]), 1e-10, x, 2);
      }));
  // (5) t >= a: sinh/cosh block
  out.push_back(detail::region_check(
      "prop_estimate2.region_hyperbolic", g, opt.grid, opt.region_grid,
      [&](double, double t) { return t >= a; },
      [&](detail::CheckAcc& acc, const double* x, const CoeffList& cf) {
        const double hh = core.cusp_profile(x[0]).v;
        const double sh = std::sinh(x[1] - 5.0), ch = std::cosh(x[1] - 5.0);
        acc.close_rel(cf[3].g, hh * hh * sh * sh, 1e-10, x, 2);
        if (g.dim > 4) acc.close_rel(cf[4].g, hh * hh * ch * ch, 1e-10, x, 2);
        for (int i = 5; i < g.dim; ++i)
          acc.close_rel(cf[i].g, hh * hh * ch * ch * std::exp(2.0 * x[4]), 1e-10,
                        x, 2);
      }));
  // (6) r >= 5 warped form
  out.push_back(detail::region_check(
      "prop_estimate2.warped_form", g, opt.grid, opt.region_grid,
      [](double r, double) { return r >= 5.0; },
      [&](detail::CheckAcc& acc, const double* x, const CoeffList& cf) {
        std::array<double, kMaxDim> y{};
        for (int i = 1; i < g.dim; ++i) y[i - 1] = x[i];
        const CoeffList hc = hat.coefficients(y.data());
        const double wf = 4.0 * std::exp(2.0 * x[0]);
        for (int i = 1; i < g.dim; ++i)
          acc.close_rel(cf[i].g / (wf * hc[i - 1].g), 1.0, 1e-10, x, 2);
      }));
  {  // (7) fiber metric non-positive: closed components and a scan
    detail::CheckAcc acc("prop_estimate2.hat_nonpositive");
    std::array<double, kMaxDim> y{};
    for (double t : detail::linspace(-10.0, a + 5.0, opt.grid.nt))
      for (double w : {-2.0, 0.0, 2.0}) {
        y[0] = t;
        if (hat.dim > 3) y[3] = w;
        const SparseCurvature sp = riemann_closed(hat, y.data());
        for (int i = 0; i < hat.dim; ++i)
          for (int j = i + 1; j < hat.dim; ++j)
            acc.nonstrict_le(sp.ijji[i][j], 0.0, y.data(), hat.dim);
      }
    const PinchReport rep =
        pinch_scan(hat, default_scan_box(hat, opt.scan_grid),
                   opt.planes_per_point, opt.seed, opt.threads);
    const double origin[1] = {0};
    acc.nonstrict_le(rep.max_k, 1e-12,
                     rep.max_point.empty() ? origin : rep.max_point.data(), hat.dim);
    acc.set_note("max_K=" + std::to_string(rep.max_k));
    out.push_back(acc.take());
  }
  out.push_back(detail::rotation_invariance("prop_estimate2.rotation_invariance", g));
  return out;
}

inline std::vector<CheckReport> verify_family1(int l, int m, double b,
                                               const VerifyOptions& opt) {
  std::vector<CheckReport> out;
  out.push_back(check_lemma_f(opt.grid.nr));
  for (auto& r : check_lemma_key(opt.grid, b)) out.push_back(std::move(r));
  const DiagonalMetric g = family1_metric(l, m, b);
  for (auto& r : check_lemma_Kij(opt.grid, g)) out.push_back(std::move(r));
  out.push_back(check_eqR(opt.grid, g));
  out.push_back(check_eqRR(opt.grid.nr, opt.grid.nt));
  out.push_back(check_mixed_term_bound(opt.grid));
  for (auto& r : check_prop_estimate(l, m, b, opt)) out.push_back(std::move(r));
  return out;
}

inline std::vector<CheckReport> verify_family2(int n, double a,
                                               const VerifyOptions& opt) {
  std::vector<CheckReport> out;
  out.push_back(check_lemma_f(opt.grid.nr));
  for (auto& r : check_lemma_key2(opt.grid, a)) out.push_back(std::move(r));
  const DiagonalMetric g = family2_metric(n, a);
  for (auto& r : check_lemma_Kij(opt.grid, g)) out.push_back(std::move(r));
  out.push_back(check_eqR(opt.grid, g));
  for (auto& r : check_prop_estimate2(n, a, opt)) out.push_back(std::move(r));
  return out;
}

}  // namespace pinchlab
