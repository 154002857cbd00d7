// Acceptance run: one PASS/FAIL line per criterion. Exits 0 once every
// criterion has been evaluated; --strict makes the exit code the number of
// failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <unistd.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geocontract/bounds.hpp"
#include "geocontract/pipeline.hpp"
#include "support.hpp"

using namespace geocontract;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string num(double v) { return fmt("%.6g", v); }

Verdict sphere_geodesic() {
  MetricSurface s = testing::with_diameter(fixtures::icosphere(4));
  const auto t0 = std::chrono::steady_clock::now();
  const GeodesicSearch g = find_shortest_geodesic(s, 32, 2024);
  const double t = seconds_since(t0);
  if (!g.candidate) return {false, "no candidate"};
  const double rel = std::abs(g.length - 2 * M_PI) / (2 * M_PI);
  return {rel <= 0.05 && t <= 60,
          "length " + num(g.length) + " vs 2pi, rel err " + num(rel) + ", " + num(t) + " s"};
}

double ellipse_circumference(double a, double b) {
  auto f = [&](double t) { return std::sqrt(a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 2 * M_PI, 15, 1e-14);
}

Verdict ellipsoid_geodesic() {
  MetricSurface s = testing::with_diameter(fixtures::by_name("ellipsoid"));
  const double oracle = ellipse_circumference(0.8, 0.6);
  const auto t0 = std::chrono::steady_clock::now();
  const GeodesicSearch g = find_shortest_geodesic(s, 64, 2024);
  const double t = seconds_since(t0);
  if (!g.candidate) return {false, "no candidate"};
  const double rel = std::abs(g.length - oracle) / oracle;
  return {rel <= 0.05 && t <= 120,
          "length " + num(g.length) + " vs ellipse " + num(oracle) + ", rel err " + num(rel) + ", " + num(t) + " s"};
}

Verdict bpfl_monotone() {
  int loops = 0, steps = 0, violations = 0;
  double worst = 0;
  for (const char* mesh : {"icosphere3", "ellipsoid", "bumpy_cap"}) {
    MetricSurface s = testing::with_diameter(fixtures::by_name(mesh));
    const double D = *s.diameter();
    const double rho = default_rho(s, 0.25 * D, 32);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 70; ++i, ++loops) {
      PolyLoop loop = testing::random_loop(s, rng, 32, 3 * D);
      for (int k = 0; k < 8 && !is_point_curve(s, loop); ++k, ++steps) {
        const PolyLoop next = bpfl_step(s, loop, rho);
        const double grow = loop_length(s, next) - loop_length(s, loop);
        worst = std::max(worst, grow / D);
        if (grow > 1e-9 * D) ++violations;
        loop = next;
      }
    }
  }
  return {violations == 0 && loops >= 200, std::to_string(loops) + " loops, " + std::to_string(steps) +
                                               " steps, " + std::to_string(violations) +
                                               " violations, largest increase " + num(worst) + " D"};
}

Verdict approximation_width() {
  const testing::Setup st = testing::make_setup("icosphere4", 1.0);
  const double Gs = g_sigma(st.cert);
  std::mt19937_64 rng(5);
  int ok = 0;
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const PolyLoop loop = testing::random_loop(st.s, rng, 48, 3 * st.D);
    const ApproximationResult a = approximate(st.s, loop, st.cert, st.nerve);
    const double w = homotopy_width(st.s, a.homotopy);
    worst = std::max(worst, w);
    if (w <= Gs) ++ok;
  }
  return {ok == 50, std::to_string(ok) + "/50 within G_sigma = " + num(Gs) + ", widest " + num(worst)};
}

Verdict pigeonhole() {
  int graphs = 0, bad = 0;
  double slowest = 0;
  for (int N = 1; N <= 4; ++N) {
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) all.emplace_back(i, j);
    for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
      std::vector<std::pair<int, int>> edges;
      for (std::size_t k = 0; k < all.size(); ++k)
        if (mask & (1u << k)) edges.push_back(all[k]);
      const NerveGraph g = abstract_nerve(N, edges);
      for (int X = 1; X <= 3; ++X) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t count = enumerate_loops(g, X).count();
        slowest = std::max(slowest, seconds_since(t0));
        const double bound = std::pow(double(N) * N + 1, X);
        if (!(double(count) <= bound)) ++bad;
        ++graphs;
      }
    }
  }
  return {bad == 0 && slowest <= 10, std::to_string(graphs) + " (graph, X) cases, " + std::to_string(bad) +
                                         " over (N^2+1)^X, slowest " + num(slowest) + " s"};
}

Verdict joins() {
  const testing::Setup st = testing::make_setup("icosphere3", 1.0);
  std::mt19937_64 rng(8);
  int ok = 0;
  double tightest = 0;
  for (int c = 0; c < 20; ++c) {
    int v = static_cast<int>(rng() % st.s.vertex_count());
    const auto& elems = st.cert.vertex_refinement[v];
    const int pieces = 2 + c % 3;
    std::vector<std::pair<PolyLoop, DiscreteHomotopy>> input;
    double wmax = 0;
    for (int p = 0; p < pieces; ++p) {
      const int idx = elems[(p + c) % elems.size()];
      const CoverElement& a = st.cert.refinement[idx];
      const CoverElement* host = nullptr;
      for (const auto& b : st.cert.cover)
        if (b.center_vertex == a.center_vertex) host = &b;
      PolyLoop l = random_element_loop(st.s, a, rng(), 12 + 4 * p);
      std::vector<SurfacePoint> pts = l.samples;
      pts[0] = st.s.vertex_point(v);
      l = make_loop(st.s, pts);
      DiscreteHomotopy h = contract_in_ball(st.s, l, *host);
      wmax = std::max(wmax, homotopy_width(st.s, h));
      input.emplace_back(std::move(l), std::move(h));
    }
    const double w = homotopy_width(st.s, join_contractions(st.s, input));
    tightest = std::max(tightest, w / (2 * wmax));
    if (w <= 2 * wmax) ++ok;
  }
  return {ok == 20, std::to_string(ok) + "/20 joins within 2 max W_i, largest ratio " + num(tightest)};
}

Verdict tree_machinery() {
  const testing::Setup st = testing::make_setup("icosphere3", 6.0);
  const int X = 3;
  const double N0 = loop_class_bound(st.nerve, X, st.cert.N);
  const double Y = 2 * g_sigma(st.cert);
  std::mt19937_64 rng(77);
  int trees = 0, tall = 0, height_ok = 0, checks_ok = 0, formula_ok = 0, attempts = 0;
  int reduced_formula = 0, reduced_extended = 0;
  while (trees < 50 && attempts < 400) {
    ++attempts;
    const PolyLoop loop = testing::random_loop(st.s, rng, 32, 3 * st.D);
    if (itinerary(st.s, loop, st.cert).alpha.m() > X) continue;
    ContractionTree t;
    try {
      t = testing::grow_tree(st, loop, X, 0.1, 0.01 * st.D);
    } catch (const Error&) {
      continue;  // stalls at closed geodesics are not trees
    }
    ++trees;
    if (t.height() > N0) ++tall;
    const MarkedContraction raw = marked_contraction(st.s, t, st.D, t.max_break_W());
    const auto [h1, h2] = t.max_counts();
    if (raw.width <= 2 * st.D * h1 + (5 * st.D + 2 * t.max_break_W()) * h2 + 1e-9) ++formula_ok;

    const ContractionTree r = reduce_height(st.s, t, st.cert, st.nerve, N0);
    if (r.height() <= N0) ++height_ok;
    if (check_tree(st.s, r, Y).ok()) ++checks_ok;
    const MarkedContraction mc = marked_contraction(st.s, r, st.D, r.max_break_W(), Y);
    const auto [r1, r2] = r.max_counts();
    if (mc.width <= 2 * st.D * r1 + (5 * st.D + 2 * r.max_break_W()) * r2 + 1e-9) ++reduced_formula;
    if (mc.width <= mc.bound + 1e-9) ++reduced_extended;
  }
  const bool pass = trees == 50 && height_ok == 50 && checks_ok == 50 && formula_ok == 50 && reduced_formula == 50 &&
                    reduced_extended == 50;
  return {pass, std::to_string(trees) + " trees (" + std::to_string(tall) + " taller than N0 = " + num(N0) +
                    "); reduced height ok " + std::to_string(height_ok) + ", walker ok " +
                    std::to_string(checks_ok) + ", 2D h1 + (5D+2W) h2 holds on " + std::to_string(formula_ok) +
                    " unreduced and " + std::to_string(reduced_formula) +
                    " reduced trees, with splice entries counted " + std::to_string(reduced_extended)};
}

Verdict end_to_end() {
  std::string detail;
  bool sphere_ok = false;
  {
    const testing::Setup st = testing::make_setup("icosphere3", 1.0);
    ContractConfig cc;
    cc.X = 2 * measure_Z(st.s, st.cert, 20, 5);
    cc.seed = 3;
    try {
      contract_with_certificate(st.s, testing::latitude_loop(st.s, 0.5, 32), st.cert, st.nerve, cc);
      detail += "sphere: no violation raised; ";
    } catch (const HypothesisViolation& e) {
      sphere_ok = e.length() <= 3 * st.D && e.geodesic().size() > 0;
      detail += "sphere: HypothesisViolated with geodesic " + num(e.length()) + "; ";
    }
  }
  bool cap_ok = false;
  {
    const testing::Setup st = testing::make_setup("bumpy_cap", 0.4 * testing::with_diameter(fixtures::by_name("bumpy_cap")).diameter().value());
    ContractConfig cc;
    cc.X = 2 * measure_Z(st.s, st.cert, 20, 5);
    cc.seed = 3;
    const GeodesicSearch probes = find_shortest_geodesic(st.s, cc.geodesic_budget, cc.seed);
    int stalled = 0;
    for (const auto& r : probes.runs)
      if (r.status == ShorteningStatus::StalledAtGeodesic && r.final_length <= 3 * st.D) ++stalled;
    cc.hypothesis = &probes;
    std::mt19937_64 rng(12);
    int succeeded = 0, violated = 0, diag_ok = 0;
    for (int i = 0; i < 20; ++i) {
      const PolyLoop loop = testing::random_loop(st.s, rng, 32, 3 * st.D);
      try {
        const ContractResult r = contract_with_certificate(st.s, loop, st.cert, st.nerve, cc);
        if (r.measured_width <= r.bound.value) ++succeeded;
      } catch (const HypothesisViolation&) {
        ++violated;
      }
      // Same loop with the short-geodesic check disabled.
      ContractConfig diag = cc;
      diag.check_hypothesis = false;
      try {
        const ContractResult r = contract_with_certificate(st.s, loop, st.cert, st.nerve, diag);
        if (r.measured_width <= r.bound.value) ++diag_ok;
      } catch (const Error&) {
      }
    }
    cap_ok = succeeded == 20;
    detail += "bumpy_cap: " + std::to_string(stalled) + "/" + std::to_string(probes.runs.size()) +
              " probes stall at closed curves <= 3D (shortest " + num(probes.length) + ", 3D = " +
              num(3 * st.D) + "), " + std::to_string(succeeded) + "/20 contracted, " + std::to_string(violated) +
              " HypothesisViolated; without the check " + std::to_string(diag_ok) + "/20 within B";
  }
  return {sphere_ok && cap_ok, detail};
}

Verdict formula_tables() {
  int bad = 0;
  auto expect = [&](double got, double want) {
    if (got != want) ++bad;
  };
  expect(depth_bound(3, 10, 1), 22);
  expect(depth_bound(3, 0.5, 1), 6);
  expect(depth_bound(4, 0, 0), 8);
  expect(nabutovsky_rotman_length(1, 1, 1, 0), 5);
  expect(nabutovsky_rotman_length(2, 1, 1, 1), 12);
  expect(nabutovsky_rotman_length(2, 2, 2, 3), 51);
  expect(total_width_bound(1, 1, 1, 0, 0).value, 14);
  const double b1 = total_width_bound(3, 1, 1.5, 99, 0.5).value, b2 = total_width_bound(3, 2, 1.5, 99, 0.5).value;
  if (std::abs(b2 / b1 - 10) > 1e-12) ++bad;
  expect(total_width_bound(2, 2, 1, 66, 0).value, 25.0 * 139);
  const MainBound m1 = main_bound(2, 1, 0), m2 = main_bound(2, 2, 0), m3 = main_bound(4, 1, 10);
  expect(m1.literal, 21), expect(m1.k2, 21), expect(m1.A_final, 21);
  expect(m2.literal, 22), expect(m2.k2, 42), expect(m2.A_final, 42);
  expect(m3.literal, 111), expect(m3.k2, 111), expect(m3.A_final, 111);

  BoundsReport r;
  r.n = 2;
  r.D_hat = 2;
  r.N = 1;
  r.X = 1;
  derive_bounds(r, 0.0);
  const std::string json = emit_report(r, {"table", "0", 0, "{}"});
  const bool visible = json.find("\"F_main\": 22.0") != std::string::npos &&
                       json.find("\"L_thm4\": 42.0") != std::string::npos &&
                       json.find("\"A_final\": 42.0") != std::string::npos;
  return {bad == 0 && visible, std::to_string(bad) + " table mismatches; report n=2 D=2 S_p=0 shows literal " +
                                   num(r.F_main) + " and k=2 " + num(r.L_thm4)};
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / ("geocontract_accept_" + std::to_string(::getpid()));
  RunConfig c;
  c.mesh = "icosphere3";
  c.seed = 11;
  c.check_hypothesis = false;
  std::vector<fs::path> dirs = {root / "a", root / "b"};
  for (const auto& d : dirs) {
    fs::remove_all(d);
    fs::create_directories(d);
    write_file(d / artifact::config, c.to_json());
    cmd_ingest(c, d);
    cmd_cover(c, d);
    cmd_nerve(c, d);
    cmd_geodesic(c, d);
    cmd_contract(c, d);
    cmd_render(c, d);
  }
  int files = 0, differing = 0;
  for (const auto& e : fs::directory_iterator(dirs[0])) {
    ++files;
    const fs::path other = dirs[1] / e.path().filename();
    if (!fs::exists(other) || read_file(e.path()) != read_file(other)) ++differing;
  }
  fs::remove_all(root);
  return {differing == 0 && files >= 8,
          std::to_string(files) + " artifacts compared, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"sphere shortest closed geodesic", sphere_geodesic},
      {"ellipsoid shortest closed geodesic", ellipsoid_geodesic},
      {"curve shortening never lengthens", bpfl_monotone},
      {"approximation width within G_sigma", approximation_width},
      {"canonical loop count within (N^2+1)^X", pigeonhole},
      {"joined contraction within 2 max W_i", joins},
      {"height reduction and marked width", tree_machinery},
      {"contraction with certificate end to end", end_to_end},
      {"formula tables", formula_tables},
      {"byte-identical reruns", determinism},
  };
  int failures = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("%s %d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", int(criteria.size()) - failures, criteria.size());
  return strict ? failures : 0;
}
