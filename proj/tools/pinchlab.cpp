// pinchlab: numerical verification of the pinched-curvature cusp metrics.
// Subcommands: verify (lemma/estimate checkers), scan (sectional-curvature
// sweep), volume (region volumes vs closed-form caps), gluing (graph checks).
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pinchlab/curvature.hpp"
#include "pinchlab/gluing.hpp"
#include "pinchlab/json_out.hpp"
#include "pinchlab/metrics.hpp"
#include "pinchlab/verify.hpp"
#include "pinchlab/volume.hpp"

namespace {

using namespace pinchlab;

int default_threads() {
  if (const char* env = std::getenv("PINCHLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    std::fputc('\n', stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << text << '\n';
  }
}

void write_check(JsonWriter& w, const CheckReport& r) {
  w.begin_object();
  w.key("name").value(r.name);
  w.key("passed").value(r.passed);
  w.key("worst_margin").value(r.worst_margin);
  w.key("samples").value(r.samples);
  w.key("witness").value(r.witness);
  w.key("note").value(r.note);
  w.end_object();
}

struct CommonArgs {
  int family = 1;
  int l = 1, m = 1, n = 3;
  double a = 7.0, b = 1.0;
  int grid = 256;
  int scan_grid = 64;
  int planes_per_point = 32;
  std::uint64_t seed = 20240801;
  double r_min = -30.0;
  int threads = default_threads();
  std::string out;
};

int run_verify(const CommonArgs& args) {
  VerifyOptions opt;
  opt.grid.nr = opt.grid.nt = args.grid;
  opt.scan_grid = args.scan_grid;
  opt.planes_per_point = args.planes_per_point;
  opt.seed = args.seed;
  opt.r_min = args.r_min;
  opt.threads = args.threads;

  std::vector<CheckReport> checks;
  if (args.family == 1)
    checks = verify_family1(args.l, args.m, args.b, opt);
  else
    checks = verify_family2(args.n, args.a, opt);

  bool all = true;
  for (const auto& c : checks) all = all && c.passed;

  JsonWriter w;
  w.begin_object();
  w.key("command").value("verify");
  w.key("family").value(args.family);
  w.key("params").begin_object();
  if (args.family == 1) {
    w.key("l").value(args.l);
    w.key("m").value(args.m);
    w.key("b").value(args.b);
  } else {
    w.key("n").value(args.n);
    w.key("a").value(args.a);
    w.key("b").value(b_of_a(args.a));
  }
  w.end_object();
  w.key("options").begin_object();
  w.key("grid").value(args.grid);
  w.key("scan_grid").value(args.scan_grid);
  w.key("planes_per_point").value(args.planes_per_point);
  w.key("seed").value(static_cast<unsigned long long>(args.seed));
  w.key("r_min").value(args.r_min);
  w.end_object();
  w.key("checks").begin_array();
  for (const auto& c : checks) write_check(w, c);
  w.end_array();
  w.key("all_passed").value(all);
  w.end_object();
  emit(w.str(), args.out);
  return all ? 0 : 1;
}

int run_scan(const CommonArgs& args, bool flat, const std::string& target,
             std::optional<double> r_lo, std::optional<double> r_hi,
             std::optional<double> t_lo, std::optional<double> t_hi,
             const std::string& csv_path) {
  DiagonalMetric g;
  std::string metric_name;
  if (flat) {
    g = flat_metric(args.n);
    metric_name = "flat";
  } else if (args.family == 1) {
    g = target == "hat" ? hat_metric_family1(args.l, args.m, args.b)
                        : family1_metric(args.l, args.m, args.b);
    metric_name = target == "hat" ? "hat1" : "family1";
  } else {
    if (target == "hat") {
      g = hat_metric_family2(args.n, args.a);
      metric_name = "hat2";
    } else if (target == "fiber") {
      g = fiber_block_family2(args.n, args.a);
      metric_name = "fiber2";
    } else {
      g = family2_metric(args.n, args.a);
      metric_name = "family2";
    }
  }
  DomainBox box = default_scan_box(g, args.scan_grid);
  auto override_axis = [&](Role role, std::optional<double> lo,
                           std::optional<double> hi) {
    const int i = g.index_of(role);
    if (i < 0) return;
    if (lo) box.axes[i].lo = *lo;
    if (hi) box.axes[i].hi = *hi;
  };
  override_axis(Role::r, r_lo, r_hi);
  override_axis(Role::t, t_lo, t_hi);

  std::vector<ScanRow> rows;
  const PinchReport rep =
      pinch_scan(g, box, args.planes_per_point, args.seed, args.threads,
                 csv_path.empty() ? nullptr : &rows);

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::binary);
    csv << "r,t,w,plane_id,k\n";
    char line[160];
    for (const auto& row : rows) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%d,%.17g\n", row.r,
                    row.t, row.w, row.plane_id, row.k);
      csv << line;
    }
  }

  JsonWriter w;
  w.begin_object();
  w.key("command").value("scan");
  w.key("metric").value(metric_name);
  w.key("params").begin_object();
  if (flat) {
    w.key("n").value(args.n);
  } else if (args.family == 1) {
    w.key("l").value(args.l);
    w.key("m").value(args.m);
    w.key("b").value(args.b);
  } else {
    w.key("n").value(args.n);
    w.key("a").value(args.a);
  }
  w.end_object();
  w.key("box").begin_array();
  for (const auto& ax : box.axes) {
    w.begin_array();
    w.value(ax.lo).value(ax.hi).value(ax.count);
    w.end_array();
  }
  w.end_array();
  w.key("planes_per_point").value(rep.planes_per_point);
  w.key("seed").value(static_cast<unsigned long long>(rep.seed));
  w.key("grid_points").value(rep.grid_points);
  w.key("samples").value(rep.samples);
  w.key("min_k").value(rep.min_k);
  w.key("min_point").value(rep.min_point);
  w.key("min_plane").value(rep.min_plane);
  w.key("max_k").value(rep.max_k);
  w.key("max_point").value(rep.max_point);
  w.key("max_plane").value(rep.max_plane);
  w.end_object();
  emit(w.str(), args.out);
  return 0;
}

int run_volume(const CommonArgs& args, const std::string& kind, double L) {
  VolumeResult vr;
  if (kind == "family1")
    vr = volume_family1(args.l, args.m, args.b, args.r_min);
  else if (kind == "family2")
    vr = volume_family2(args.n, args.a, 1.0, 1.0, args.r_min);
  else if (kind == "piece")
    vr = piece_volume_factor(L, args.b);
  else if (kind == "piece2")
    vr = piece_volume_factor2(args.n, L, args.b);
  else
    throw CLI::ValidationError("--kind must be family1|family2|piece|piece2");

  JsonWriter w;
  w.begin_object();
  w.key("command").value("volume");
  w.key("kind").value(kind);
  w.key("params").begin_object();
  w.key("l").value(args.l);
  w.key("m").value(args.m);
  w.key("n").value(args.n);
  w.key("a").value(args.a);
  w.key("b").value(args.b);
  w.key("L").value(L);
  w.key("r_min").value(args.r_min);
  w.end_object();
  w.key("value").value(vr.value);
  w.key("tail_estimate").value(vr.tail_estimate);
  w.key("bound").value(vr.bound);
  w.key("margin").value(vr.margin);
  w.key("truncation_r").value(vr.truncation_r);
  w.key("decay_rate").value(vr.decay_rate);
  w.key("passed").value(vr.passed);
  w.end_object();
  emit(w.str(), args.out);
  return vr.passed ? 0 : 1;
}

int run_gluing(const std::string& path, const std::vector<double>& r_samples,
               const std::string& out) {
  const GluingGraph graph = load_gluing_graph_file(path);
  const GluingReport rep = check_geometrization(graph, r_samples);

  JsonWriter w;
  w.begin_object();
  w.key("command").value("gluing");
  w.key("input").value(path);
  w.key("r_samples").value(r_samples);
  w.key("pieces").begin_array();
  for (const auto& p : rep.pieces) {
    w.begin_object();
    w.key("piece").value(p.piece);
    w.key("seifert_ok").value(p.seifert_ok);
    w.key("residual").begin_object();
    w.key("num").value(p.residual.num);
    w.key("den").value(p.residual.den);
    w.end_object();
    w.end_object();
  }
  w.end_array();
  w.key("edges").begin_array();
  for (const auto& e : rep.edges) {
    w.begin_object();
    w.key("edge").value(e.edge);
    w.key("lengths_ok").value(e.lengths_ok);
    w.key("twist_ok").value(e.twist_ok);
    w.key("map_ok").value(e.map_ok);
    w.key("monodromy_ok").value(e.monodromy_ok);
    w.key("failure_class").value(e.failure_class);
    w.end_object();
  }
  w.end_array();
  w.key("passed").value(rep.passed);
  w.end_object();
  emit(w.str(), out);
  return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical checks for pinched warped-product cusp metrics"};
  app.require_subcommand(1);

  CommonArgs args;

  auto add_common = [&](CLI::App* cmd, bool with_scan_opts) {
    cmd->add_option("--family", args.family)->check(CLI::IsMember({1, 2}));
    cmd->add_option("--l", args.l);
    cmd->add_option("--m", args.m);
    cmd->add_option("--n", args.n);
    cmd->add_option("--a", args.a);
    cmd->add_option("--b", args.b);
    cmd->add_option("--seed", args.seed);
    cmd->add_option("--threads", args.threads);
    cmd->add_option("--out", args.out);
    cmd->add_option("--r-min", args.r_min);
    if (with_scan_opts) {
      cmd->add_option("--grid", args.grid);
      cmd->add_option("--scan-grid", args.scan_grid);
      cmd->add_option("--planes-per-point", args.planes_per_point);
    }
  };

  CLI::App* verify = app.add_subcommand("verify", "run the lemma and estimate checkers");
  add_common(verify, true);

  CLI::App* scan = app.add_subcommand("scan", "sweep sectional curvatures over a box");
  bool flat = false;
  std::string target = "metric";
  std::optional<double> r_lo, r_hi, t_lo, t_hi;
  std::string csv_path;
  add_common(scan, true);
  scan->add_flag("--flat", flat, "scan the flat baseline metric");
  scan->add_option("--target", target, "metric|hat|fiber")
      ->check(CLI::IsMember({"metric", "hat", "fiber"}));
  scan->add_option("--r-lo", r_lo);
  scan->add_option("--r-hi", r_hi);
  scan->add_option("--t-lo", t_lo);
  scan->add_option("--t-hi", t_hi);
  scan->add_option("--csv", csv_path, "write every sample as a CSV row");

  CLI::App* volume = app.add_subcommand("volume", "region volumes against closed-form caps");
  std::string kind = "family1";
  double L = 1.0;
  add_common(volume, false);
  volume->add_option("--kind", kind, "family1|family2|piece|piece2");
  volume->add_option("--L", L, "boundary/fiber length parameter");

  CLI::App* gluing = app.add_subcommand("gluing", "check a gluing graph description");
  std::string graph_path;
  std::vector<double> r_samples{-6.0, -2.0, 0.0, 1.5, 3.0, 6.0};
  gluing->add_option("path", graph_path, "graph JSON file")->required();
  gluing->add_option("--r-samples", r_samples, "r values for boundary checks");
  gluing->add_option("--out", args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return run_verify(args);
    if (scan->parsed())
      return run_scan(args, flat, target, r_lo, r_hi, t_lo, t_hi, csv_path);
    if (volume->parsed()) return run_volume(args, kind, L);
    if (gluing->parsed()) return run_gluing(graph_path, r_samples, args.out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
