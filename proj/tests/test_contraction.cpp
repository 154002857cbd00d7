#include "doctest.h"

#include <cmath>

#include "support.hpp"

using namespace geocontract;
using testing::code_of;

namespace {

const testing::Setup& medium() {
  static const testing::Setup s = testing::make_setup("icosphere3", 1.5);
  return s;
}

const testing::Setup& coarse() {
  static const testing::Setup s = testing::make_setup("icosphere3", 6.0);
  return s;
}

void check_marked(const testing::Setup& st, const ContractionTree& t, double Y = 0) {
  const TreeCheck c = check_tree(st.s, t, Y);
  for (const auto& p : c.problems) MESSAGE(p);
  CHECK(c.ok());
  const MarkedContraction mc = marked_contraction(st.s, t, st.D, t.max_break_W(), Y);
  const auto [h1, h2] = t.max_counts();
  CHECK(mc.h1_used <= h1);
  CHECK(mc.h2_used <= h2);
  CHECK(mc.width <= mc.bound + 1e-9);
}

}  // namespace

TEST_CASE("trees of trivial loops") {
  const auto& st = medium();
  const ContractionTree pt = build_tree(st.s, point_loop(st.s.vertex_point(4), 16), st.cert, st.nerve, {6});
  CHECK(pt.alive_count() == 1);
  CHECK(pt.height() == 0);
  CHECK(marked_contraction(st.s, pt, st.D, 0).width == 0.0);

  const PolyLoop inside = random_element_loop(st.s, st.cert.refinement[2], 5, 16);
  const ContractionTree path = build_tree(st.s, inside, st.cert, st.nerve, {6});
  CHECK(path.deepest_counts().second == 0);
  CHECK(path.paths().size() == 1);
  for (const auto& n : path.nodes)
    if (n.alive && n.children.empty()) CHECK(is_point_curve(st.s, n.loop));
  check_marked(st, path);

  const int m = itinerary(st.s, testing::latitude_loop(st.s, 0.0, 32), st.cert).alpha.m();
  CHECK(code_of([&] { build_tree(st.s, testing::latitude_loop(st.s, 0.0, 32), st.cert, st.nerve, {m - 1}); }) ==
        ErrorCode::ContractViolation);
}

TEST_CASE("a tree with a break node") {
  const auto& st = medium();
  std::mt19937_64 rng(1);
  bool found = false;
  for (int i = 0; i < 60 && !found; ++i) {
    const PolyLoop loop = testing::random_loop(st.s, rng, 32, 3 * st.D);
    const int m = itinerary(st.s, loop, st.cert).alpha.m();
    if (m < 4) continue;
    ContractionTree t;
    try {
      t = testing::grow_tree(st, loop, m, 0.1, 0.02 * st.D);
    } catch (const Error&) {
      continue;
    }
    for (const auto& n : t.nodes) {
      if (!n.alive || n.kind != StepKind::Split) continue;
      found = true;
      CHECK(n.children.size() >= 2);
      CHECK(n.split->pieces.size() == n.children.size());
      for (int c : n.children) CHECK(t.nodes[c].generation == n.generation + 1);
    }
    if (found) {
      CHECK(t.deepest_counts().second + t.deepest_counts().first == t.height());
      check_marked(st, t);
    }
  }
  CHECK(found);
}

TEST_CASE("pigeonhole bound on loop classes") {
  const NerveGraph tri = abstract_nerve(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(loop_class_bound(tri, 3, 3) == 7.0);
  CHECK(loop_class_bound(tri, 3, 3, 1) == 1000.0);
  const auto& st = coarse();
  CHECK(loop_class_bound(st.nerve, 3, st.cert.N) <= std::pow(st.cert.N * st.cert.N + 1.0, 3));
}

TEST_CASE("height reduction") {
  const auto& st = coarse();
  const int X = 3;
  const double N0 = loop_class_bound(st.nerve, X, st.cert.N);
  const double Y = 2 * g_sigma(st.cert);
  std::mt19937_64 rng(3);
  int reduced = 0;
  for (int i = 0; i < 8; ++i) {
    const PolyLoop loop = testing::random_loop(st.s, rng, 32, 3 * st.D);
    if (itinerary(st.s, loop, st.cert).alpha.m() > X) continue;
    ContractionTree t;
    try {
      t = testing::grow_tree(st, loop, X, 0.1, 0.01 * st.D);
    } catch (const Error&) {
      continue;
    }
    const ContractionTree r = reduce_height(st.s, t, st.cert, st.nerve, N0);
    CHECK(r.height() <= N0);
    if (t.height() <= N0) {
      CHECK(r.height() == t.height());
      CHECK(r.splices == 0);
    } else {
      ++reduced;
      CHECK(r.height() < t.height());
    }
    check_marked(st, r, Y);
    const ContractionTree again = reduce_height(st.s, r, st.cert, st.nerve, N0);
    CHECK(again.height() == r.height());
  }
  CHECK(reduced > 0);
}

TEST_CASE("total width bound formula") {
  CHECK(total_width_bound(1, 1, 1.0, 0.0, 0.0).value == 14.0);
  CHECK(total_width_bound(1, 1, 1.0, 0.0, 0.0).decimal == "14");
  const double D = 2.0, W = 0.5;
  const int N = 5;
  const double b1 = total_width_bound(N, 1, D, 66 * D, W).value;
  const double b2 = total_width_bound(N, 2, D, 66 * D, W).value;
  CHECK(b1 == doctest::Approx(26.0 * (139 * D + W)));
  CHECK(b2 / b1 == doctest::Approx(N * N + 1.0));
  const WidthBound huge = total_width_bound(300, 80, 1.0, 1.0, 0.0);
  CHECK(std::isinf(huge.value));
  CHECK(huge.log10 == doctest::Approx(80 * std::log10(90001.0) + std::log10(9.0)));
  CHECK(huge.decimal.find("e+") != std::string::npos);
}

TEST_CASE("full contraction with a certificate") {
  const auto& st = medium();
  ContractConfig cc;
  cc.X = 2 * measure_Z(st.s, st.cert, 10, 2);
  cc.check_hypothesis = false;
  const CoverElement& a = st.cert.refinement[1];
  const PolyLoop inside = random_element_loop(st.s, a, 9, 16);
  const ContractResult r = contract_with_certificate(st.s, inside, st.cert, st.nerve, cc);
  CHECK(r.measured_width <= r.bound.value);
  CHECK(r.measured_width <= 2 * st.cert.G + 1e-9);
  CHECK(r.trees.size() == 1);
  CHECK(r.Y == doctest::Approx(2 * g_sigma(st.cert)));
}

TEST_CASE("short closed geodesics violate the hypothesis") {
  const testing::Setup db = testing::make_setup("dumbbell", 1.0);
  ContractConfig cc;
  cc.X = 2 * measure_Z(db.s, db.cert, 10, 2);
  cc.geodesic_budget = 16;
  const PolyLoop loop = random_element_loop(db.s, db.cert.refinement[0], 1, 16);
  try {
    contract_with_certificate(db.s, loop, db.cert, db.nerve, cc);
    FAIL("expected HypothesisViolated");
  } catch (const HypothesisViolation& e) {
    CHECK(e.code() == ErrorCode::HypothesisViolated);
    CHECK(e.length() <= 3 * db.D);
    CHECK(loop_length(db.s, e.geodesic()) == doctest::Approx(e.length()).epsilon(1e-6));
  }
}
