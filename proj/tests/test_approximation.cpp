#include "doctest.h"

#include "support.hpp"

using namespace geocontract;
using testing::code_of;

namespace {

const testing::Setup& ico3() {
  static const testing::Setup s = testing::make_setup("icosphere3", 1.0);
  return s;
}

// Two small loops in one element sharing their first sample, each with its
// radial contraction.
std::vector<std::pair<PolyLoop, DiscreteHomotopy>> element_pieces(const testing::Setup& st, int count,
                                                                  bool shared = true) {
  const auto& s = st.s;
  const CoverElement& a = st.cert.refinement[0];
  const CoverElement* host = nullptr;
  for (const auto& b : st.cert.cover)
    if (b.center_vertex == a.center_vertex) host = &b;
  REQUIRE(host);
  std::vector<std::pair<PolyLoop, DiscreteHomotopy>> out;
  SurfacePoint base;
  for (int i = 0; i < count; ++i) {
    PolyLoop l = random_element_loop(s, a, 10 + i, 16);
    if (i == 0) base = l.samples[0];
    std::vector<SurfacePoint> pts = l.samples;
    if (shared) pts[0] = base;
    l = make_loop(s, pts);
    out.emplace_back(l, contract_in_ball(s, l, *host));
  }
  return out;
}

}  // namespace

TEST_CASE("combined width constant") {
  CHECK(g_sigma(3.0, 21.0) == doctest::Approx(33.0));
  CHECK(g_sigma(0.0, 0.0) == 0.0);
  CHECK(g_sigma(1.0, 2.0) == 6.0);
}

TEST_CASE("approximating loops by nerve walks") {
  const auto& st = ico3();
  const double Gs = g_sigma(st.cert);

  const PolyLoop inside = random_element_loop(st.s, st.cert.refinement[3], 1, 16);
  const ApproximationResult a = approximate(st.s, inside, st.cert, st.nerve);
  CHECK(a.alpha.m() == 0);
  CHECK(a.width <= st.cert.G + 2 * st.cert.F_A);

  const ApproximationResult p = approximate(st.s, point_loop(st.s.vertex_point(17), 8), st.cert, st.nerve);
  CHECK(p.alpha.m() == 0);
  CHECK(p.width <= st.cert.F_A + st.cert.G);

  const PolyLoop eq = testing::latitude_loop(st.s, 0.0, 64);
  const ApproximationResult e = approximate(st.s, eq, st.cert, st.nerve);
  CHECK(e.alpha.m() >= 3);
  CHECK(is_valid_loop(st.nerve, e.alpha));
  CHECK(e.width <= Gs);
  CHECK(homotopy_width(st.s, e.homotopy) == doctest::Approx(e.width));
  CHECK(e.homotopy.source().samples == eq.samples);
  CHECK(loop_length(st.s, e.homotopy.target()) == doctest::Approx(path_length(st.s, realize(st.nerve, e.alpha))).epsilon(1e-6));
}

TEST_CASE("Z estimate is reproducible") {
  const auto& st = ico3();
  const int z1 = measure_Z(st.s, st.cert, 12, 4);
  CHECK(z1 >= 0);
  CHECK(measure_Z(st.s, st.cert, 12, 4) == z1);
  const PolyLoop pt = point_loop(st.s.vertex_point(0), 8);
  CHECK(itinerary(st.s, pt, st.cert).alpha.m() == 0);
}

TEST_CASE("breaking a long loop") {
  const auto& st = ico3();
  // The equator traversed twice.
  const PolyLoop once = testing::latitude_loop(st.s, 0.0, 64);
  std::vector<SurfacePoint> twice = once.samples;
  twice.insert(twice.end(), once.samples.begin(), once.samples.end());
  const PolyLoop eq = make_loop(st.s, twice);
  const int m = itinerary(st.s, eq, st.cert).alpha.m();
  REQUIRE(m >= 5);
  const int X = m - 1;
  const BreakResult br = break_loop(st.s, eq, X, st.cert, st.nerve);
  CHECK(br.pieces.size() >= 2);
  for (int pm : br.piece_m) CHECK(pm <= X);
  for (const auto& piece : br.pieces) {
    CHECK(itinerary(st.s, piece, st.cert).alpha.m() <= X);
    CHECK(geodesic_distance(st.s, piece.samples[0], br.basepoint) <= st.s.point_tolerance());
  }
  CHECK(br.measured_delta > 0);
  CHECK(homotopy_width(st.s, br.homotopy) == doctest::Approx(br.measured_W));
  CHECK(code_of([&] { break_loop(st.s, eq, m, st.cert, st.nerve); }) == ErrorCode::ContractViolation);
}

TEST_CASE("homotopies between loops with the same approximation") {
  const auto& st = ico3();
  const double Gs = g_sigma(st.cert);
  const PolyLoop eq = testing::latitude_loop(st.s, 0.0, 64);
  const DiscreteHomotopy same = same_approx_homotopy(st.s, eq, eq, st.cert, st.nerve);
  CHECK(homotopy_width(st.s, same) <= 2 * Gs);
  CHECK(same.source().samples == eq.samples);

  const PolyLoop eq2 = resample(st.s, eq, 64, 0.37);
  if (canonical_form(itinerary(st.s, eq2, st.cert).alpha) == canonical_form(itinerary(st.s, eq, st.cert).alpha))
    CHECK(homotopy_width(st.s, same_approx_homotopy(st.s, eq, eq2, st.cert, st.nerve)) <= 2 * Gs);

  const PolyLoop other = testing::latitude_loop(st.s, 0.6, 64);
  CHECK(code_of([&] { same_approx_homotopy(st.s, eq, other, st.cert, st.nerve); }) ==
        ErrorCode::DifferentApproximations);
}

TEST_CASE("joining contractions at a common point") {
  const auto& st = ico3();
  auto one = element_pieces(st, 1);
  const double w1 = homotopy_width(st.s, one[0].second);
  CHECK(homotopy_width(st.s, join_contractions(st.s, one)) <= 2 * w1 + 1e-9);

  auto two = element_pieces(st, 2);
  const double wmax = std::max(homotopy_width(st.s, two[0].second), homotopy_width(st.s, two[1].second));
  const DiscreteHomotopy j = join_contractions(st.s, two);
  CHECK(homotopy_width(st.s, j) <= 2 * wmax + 1e-9);
  CHECK(is_point_curve(st.s, j.target()));

  auto bad = element_pieces(st, 2, false);
  CHECK(code_of([&] { join_contractions(st.s, bad); }) == ErrorCode::BasepointMismatch);
}
