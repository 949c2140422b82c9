#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinchlab/curves.hpp"

// Combinatorial and metric checks for gluing circle-bundle pieces along
// boundary tori: monodromy angles are exact rationals (fractions of a full
// turn), torus gluings are checked as lattice isometries, and the per-piece
// fiber-rotation relation is verified in exact arithmetic.

namespace pinchlab {

// the angle 2*pi*num/den, stored reduced with 0 <= num < den
struct Angle {
  long long num = 0;
  long long den = 1;

  static Angle of(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("angle denominator is zero");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    num %= den;
    if (num < 0) num += den;
    const long long g = std::gcd(num, den);
    return Angle{num / g, den / g};
  }

  Angle operator+(const Angle& o) const {
    return of(num * o.den + o.num * den, den * o.den);
  }
  Angle operator-() const { return of(-num, den); }
  bool operator==(const Angle&) const = default;
  bool is_zero() const { return num == 0; }
  double turns() const { return static_cast<double>(num) / den; }
};

struct ConePoint {
  long long q = 0, p = 1;  // coprime, 0 < q < p
};

struct PieceSpec {
  int genus = 0;
  bool orientable_base = true;
  std::vector<ConePoint> cone_points;
  int boundary_count = 1;
  std::vector<Angle> alpha_angles, beta_angles;  // one per handle
  std::vector<Angle> cone_angles;                // 2*pi*q_i/p_i
  std::vector<Angle> boundary_angles;            // fiber rotation per boundary
  double fiber_length = 1.0;
  double boundary_circle_length = 1.0;
};

struct BoundaryTorus {
  double len_first = 1.0;   // base-boundary circle
  double len_second = 1.0;  // fiber circle
  Angle twist;              // rotation of the second factor along the first
};

enum class MapKind { trivial, flip, general };

struct GluingMap {
  MapKind kind = MapKind::trivial;
  // columns are the images of the two factor curves in the target basis
  std::array<std::array<long long, 2>, 2> matrix{{{1, 0}, {0, 1}}};

  long long det() const {
    return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
  }
  static GluingMap trivial_map() { return {MapKind::trivial, {{{1, 0}, {0, 1}}}}; }
  static GluingMap flip_map() { return {MapKind::flip, {{{0, 1}, {1, 0}}}}; }
};

struct GluingEdge {
  int piece_a = 0, boundary_a = 0;
  int piece_b = 0, boundary_b = 0;
  GluingMap map;
};

struct GluingGraph {
  std::vector<PieceSpec> pieces;
  std::vector<GluingEdge> edges;
};

struct SeifertResult {
  bool passed = false;
  Angle residual;
};

// fiber-rotation relation for an orientable base: the handle commutators drop
// out, so the cone and boundary rotations must sum to a whole turn
inline SeifertResult check_seifert_relation(const PieceSpec& piece) {
  if (!piece.orientable_base)
    throw std::invalid_argument(
        "non-orientable bases are not supported (relation differs)");
  if (piece.cone_angles.size() != piece.cone_points.size())
    throw std::invalid_argument("cone angle count mismatch");
  for (std::size_t i = 0; i < piece.cone_points.size(); ++i) {
    const auto& cp = piece.cone_points[i];
    if (cp.p <= 0 || cp.q <= 0 || cp.q >= cp.p || std::gcd(cp.q, cp.p) != 1)
      throw std::invalid_argument("cone point needs coprime 0 < q < p");
    if (!(piece.cone_angles[i] == Angle::of(cp.q, cp.p)))
      throw std::invalid_argument("cone angle must be 2 pi q/p");
  }
  Angle sum;
  for (const Angle& a : piece.cone_angles) sum = sum + a;
  for (const Angle& a : piece.boundary_angles) sum = sum + a;
  return {sum.is_zero(), sum};
}

// flip-map matching of the four rotation angles, exact
inline bool check_flip_condition(const Angle& m1, const Angle& s1,
                                 const Angle& m2, const Angle& s2) {
  return m1 == s2 && s1 == m2;
}

enum class TwistOutcome { pass, mismatch, reciprocal_mismatch };

// the reciprocal rotation (of the first factor along the second) scales the
// stored twist by (len_second/len_first)^2
inline double reciprocal_twist_turns(const BoundaryTorus& t) {
  const double ratio = t.len_second / t.len_first;
  return t.twist.turns() * ratio * ratio;
}

// shear matching for a flip gluing: the twist of one torus must equal the
// reciprocal twist of the other; the mirrored equality is then implied, but
// it is recomputed and a violation reported as its own failure class
inline TwistOutcome check_twist_condition(const BoundaryTorus& t1,
                                          const BoundaryTorus& t2,
                                          const GluingMap& map) {
  if (map.kind != MapKind::flip)
    throw std::invalid_argument("twist condition applies to flip maps");
  auto close_mod1 = [](double a, double b) {
    double d = std::fmod(std::abs(a - b), 1.0);
    d = std::min(d, 1.0 - d);
    return d <= 1e-12;
  };
  bool first;
  if (t2.len_first == t2.len_second)
    first = t1.twist == t2.twist;  // square torus: exact rational comparison
  else
    first = close_mod1(t1.twist.turns(), reciprocal_twist_turns(t2));
  bool second;
  if (t1.len_first == t1.len_second)
    second = t1.twist == t2.twist;
  else
    second = close_mod1(reciprocal_twist_turns(t1), t2.twist.turns());
  if (first && !second) return TwistOutcome::reciprocal_mismatch;
  return first ? TwistOutcome::pass : TwistOutcome::mismatch;
}

// Gram matrix of the marked lattice basis: |u| = len_first, |v| = len_second,
// u.v = len_second^2 * turns (from twist = 2 pi (u.v)/|v|^2)
inline std::array<std::array<double, 2>, 2> torus_gram(const BoundaryTorus& t) {
  const double uv = t.len_second * t.len_second * t.twist.turns();
  return {{{t.len_first * t.len_first, uv}, {uv, t.len_second * t.len_second}}};
}

inline bool gram_isometry(const std::array<std::array<double, 2>, 2>& ga,
                          const std::array<std::array<double, 2>, 2>& gb,
                          const GluingMap& map) {
  if (std::abs(map.det()) != 1) return false;
  double scale = 0.0;
  for (const auto& row : ga)
    for (double vv : row) scale = std::max(scale, std::abs(vv));
  // (M^T G_b M) must reproduce G_a
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          s += map.matrix[k][i] * gb[k][l] * map.matrix[l][j];
      if (std::abs(s - ga[i][j]) > 1e-12 * std::max(1.0, scale)) return false;
    }
  return true;
}

// self-map version on an explicit planar basis
inline bool lattice_isometry_check(const std::array<double, 2>& u,
                                   const std::array<double, 2>& v,
                                   const GluingMap& map) {
  const double uu = u[0] * u[0] + u[1] * u[1];
  const double vv = v[0] * v[0] + v[1] * v[1];
  const double uv = u[0] * v[0] + u[1] * v[1];
  if (!(uu > 0.0) || !(vv > 0.0) || uv * uv >= uu * vv)
    throw std::invalid_argument("degenerate lattice basis");
  const std::array<std::array<double, 2>, 2> g{{{uu, uv}, {uv, vv}}};
  return gram_isometry(g, g, map);
}

// both boundary circles carry the same length profile profile(r) b e^{ramp-2} L
inline double boundary_length_profile(double r, double L, double b = 1.0) {
  const CoreCurves& core = CoreCurves::get();
  return core.cusp_profile(r).v * b * std::exp(core.ramp(r).v - 2.0) * L;
}

inline BoundaryTorus boundary_at_r(const PieceSpec& piece, double r, double L,
                                   double b, int boundary = 0) {
  const double s = boundary_length_profile(r, L, b);
  return {s, s, piece.boundary_angles.at(boundary)};
}

struct PieceReport {
  int piece = 0;
  bool seifert_ok = false;
  Angle residual;
};

struct EdgeReport {
  int edge = 0;
  bool lengths_ok = true;
  bool twist_ok = true;
  bool map_ok = true;
  bool monodromy_ok = true;
  std::string failure_class;  // empty when the edge passes

  bool ok() const { return lengths_ok && twist_ok && map_ok && monodromy_ok; }
};

struct GluingReport {
  std::vector<PieceReport> pieces;
  std::vector<EdgeReport> edges;
  bool passed = false;
};

inline GluingReport check_geometrization(const GluingGraph& graph,
                                         const std::vector<double>& r_samples) {
  // every boundary component must appear in exactly one edge
  std::vector<std::vector<int>> used(graph.pieces.size());
  for (std::size_t i = 0; i < graph.pieces.size(); ++i)
    used[i].assign(graph.pieces[i].boundary_count, 0);
  for (const auto& e : graph.edges) {
    for (auto [p, bd] : {std::pair{e.piece_a, e.boundary_a},
                         std::pair{e.piece_b, e.boundary_b}}) {
      if (p < 0 || p >= static_cast<int>(graph.pieces.size()) || bd < 0 ||
          bd >= graph.pieces[p].boundary_count)
        throw std::invalid_argument("edge references a missing boundary");
      used[p][bd]++;
    }
  }
  for (const auto& u : used)
    for (int cnt : u)
      if (cnt != 1) throw std::invalid_argument("dangling or reused boundary");

  GluingReport rep;
  for (std::size_t i = 0; i < graph.pieces.size(); ++i) {
    const SeifertResult sr = check_seifert_relation(graph.pieces[i]);
    rep.pieces.push_back({static_cast<int>(i), sr.passed, sr.residual});
  }

  for (std::size_t ei = 0; ei < graph.edges.size(); ++ei) {
    const auto& e = graph.edges[ei];
    const PieceSpec& pa = graph.pieces[e.piece_a];
    const PieceSpec& pb = graph.pieces[e.piece_b];
    EdgeReport er;
    er.edge = static_cast<int>(ei);
    for (double r : r_samples) {
      const double scale = boundary_length_profile(r, 1.0);
      const BoundaryTorus ta{scale * pa.boundary_circle_length,
                             scale * pa.fiber_length,
                             pa.boundary_angles.at(e.boundary_a)};
      const BoundaryTorus tb{scale * pb.boundary_circle_length,
                             scale * pb.fiber_length,
                             pb.boundary_angles.at(e.boundary_b)};
      auto close = [](double x, double y) {
        return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
      };
      switch (e.map.kind) {
        case MapKind::trivial:
          er.lengths_ok = er.lengths_ok && close(ta.len_first, tb.len_first) &&
                          close(ta.len_second, tb.len_second);
          er.twist_ok = er.twist_ok && ta.twist == tb.twist;
          er.monodromy_ok = er.monodromy_ok && ta.twist == tb.twist;
          break;
        case MapKind::flip: {
          er.lengths_ok = er.lengths_ok && close(ta.len_first, tb.len_second) &&
                          close(ta.len_second, tb.len_first);
          const TwistOutcome tw = check_twist_condition(ta, tb, e.map);
          er.twist_ok = er.twist_ok && tw == TwistOutcome::pass;
          if (tw == TwistOutcome::reciprocal_mismatch)
            er.failure_class = "reciprocal_twist_mismatch";
          // rotation-angle pairing under the factor exchange; for square tori
          // the reciprocal rotation equals the stored one
          if (ta.len_first == ta.len_second && tb.len_first == tb.len_second)
            er.monodromy_ok = er.monodromy_ok &&
                              check_flip_condition(ta.twist, ta.twist, tb.twist,
                                                   tb.twist);
          break;
        }
        case MapKind::general:
          er.map_ok = er.map_ok &&
                      gram_isometry(torus_gram(ta), torus_gram(tb), e.map);
          break;
      }
    }
    if (er.failure_class.empty()) {
      if (!er.lengths_ok) er.failure_class = "length_mismatch";
      else if (!er.twist_ok) er.failure_class = "twist_mismatch";
      else if (!er.map_ok) er.failure_class = "lattice_not_isometry";
      else if (!er.monodromy_ok) er.failure_class = "monodromy_mismatch";
    }
    rep.edges.push_back(er);
  }

  rep.passed = true;
  for (const auto& p : rep.pieces) rep.passed = rep.passed && p.seifert_ok;
  for (const auto& e : rep.edges) rep.passed = rep.passed && e.ok();
  return rep;
}

// ---- JSON loading ----------------------------------------------------------

inline Angle angle_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw std::runtime_error("angle must be {\"num\": int, \"den\": int}");
  return Angle::of(j.at("num").get<long long>(), j.at("den").get<long long>());
}

inline GluingGraph load_gluing_graph(const nlohmann::json& j) {
  GluingGraph graph;
  if (!j.contains("pieces") || !j.contains("edges"))
    throw std::runtime_error("graph needs top-level 'pieces' and 'edges'");
  for (const auto& pj : j.at("pieces")) {
    PieceSpec p;
    p.genus = pj.value("genus", 0);
    p.orientable_base = pj.value("orientable_base", true);
    for (const auto& cj : pj.value("cone_points", nlohmann::json::array()))
      p.cone_points.push_back(
          {cj.at("q").get<long long>(), cj.at("p").get<long long>()});
    p.boundary_count = pj.at("boundary_count").get<int>();
    if (p.boundary_count < 1) throw std::runtime_error("boundary_count >= 1");
    const auto& mj = pj.at("monodromy");
    for (const auto& aj : mj.value("alpha", nlohmann::json::array()))
      p.alpha_angles.push_back(angle_from_json(aj));
    for (const auto& aj : mj.value("beta", nlohmann::json::array()))
      p.beta_angles.push_back(angle_from_json(aj));
    for (const auto& aj : mj.value("cone", nlohmann::json::array()))
      p.cone_angles.push_back(angle_from_json(aj));
    for (const auto& aj : mj.at("boundary"))
      p.boundary_angles.push_back(angle_from_json(aj));
    if (static_cast<int>(p.boundary_angles.size()) != p.boundary_count)
      throw std::runtime_error("boundary angle count mismatch");
    p.fiber_length = pj.value("fiber_length", 1.0);
    p.boundary_circle_length = pj.value("boundary_circle_length", 1.0);
    if (!(p.fiber_length > 0.0) || !(p.boundary_circle_length > 0.0))
      throw std::runtime_error("lengths must be positive");
    graph.pieces.push_back(std::move(p));
  }
  for (const auto& ej : j.at("edges")) {
    GluingEdge e;
    e.piece_a = ej.at("piece_a").get<int>();
    e.boundary_a = ej.at("boundary_a").get<int>();
    e.piece_b = ej.at("piece_b").get<int>();
    e.boundary_b = ej.at("boundary_b").get<int>();
    const auto& mj = ej.at("map");
    const std::string kind = mj.at("kind").get<std::string>();
    if (kind == "trivial") {
      e.map = GluingMap::trivial_map();
    } else if (kind == "flip") {
      e.map = GluingMap::flip_map();
    } else if (kind == "general") {
      e.map.kind = MapKind::general;
      const auto& mat = mj.at("matrix");
      for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj)
          e.map.matrix[i][jj] = mat.at(i).at(jj).get<long long>();
      if (std::abs(e.map.det()) != 1)
        throw std::runtime_error("gluing matrix must have determinant +-1");
    } else {
      throw std::runtime_error("map kind must be trivial|flip|general");
    }
    graph.edges.push_back(e);
  }
  return graph;
}

inline GluingGraph load_gluing_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  nlohmann::json j;
  in >> j;
  return load_gluing_graph(j);
}

}  // namespace pinchlab
