#include "doctest.h"

#include <random>
#include <set>

#include "geocontract/errors.hpp"
#include "support.hpp"

using namespace geocontract;
using testing::code_of;

namespace {

CoverElement element(const MetricSurface& s, int center, std::vector<int> members, ElementKind kind) {
  CoverElement e;
  e.center_vertex = center;
  e.center = s.vertex_point(center);
  e.radius = 1;
  e.kind = kind;
  e.members = std::move(members);
  return e;
}

}  // namespace

TEST_CASE("ball covers cover every vertex") {
  MetricSurface ico = testing::with_diameter(fixtures::icosphere(3));
  const BallCover bc = build_ball_cover(ico, 2.0, 1);
  std::vector<int> inA(ico.vertex_count()), inB(ico.vertex_count());
  for (const auto& e : bc.refinement) {
    CHECK(!e.members.empty());
    for (int v : e.members) inA[v] = 1;
  }
  for (const auto& e : bc.cover)
    for (int v : e.members) inB[v] = 1;
  CHECK(std::count(inA.begin(), inA.end(), 1) == ico.vertex_count());
  CHECK(std::count(inB.begin(), inB.end(), 1) == ico.vertex_count());
  CHECK(bc.refinement.size() < 40);

  MetricSurface tet = testing::with_diameter(fixtures::tetrahedron(), 4);
  const BallCover tb = build_ball_cover(tet, 3.0, 1);
  const auto cert = certify_cover(tet, tb.refinement, tb.cover, 16, 2);
  CHECK(cert.N >= 1);
  CHECK(cert.N <= 9);

  CHECK(code_of([&] { build_ball_cover(ico, 1e-9 * *ico.diameter(), 1); }) == ErrorCode::RadiusTooSmall);
}

TEST_CASE("certified ball cover constants") {
  const double r = 1.0;
  const auto setup = testing::make_setup("icosphere3", r);
  const auto& c = setup.cert;
  CHECK(c.F == std::max(c.F_A, c.F_B));
  CHECK(c.N >= static_cast<int>(c.refinement.size()));
  CHECK(c.N >= static_cast<int>(c.cover.size()));
  CHECK(c.F_A <= 2 * (r / 4) + 2 * c.slack);
  CHECK(c.G <= 2 * r + 2 * c.slack);
  CHECK(c.G_sampled <= c.G);
  // Every intersecting refinement pair has a containing cover element.
  for (const auto& [key, k] : c.pairing) {
    for (int v : c.refinement[key.first].members) CHECK(c.cover[k].contains_vertex(v));
    for (int v : c.refinement[key.second].members) CHECK(c.cover[k].contains_vertex(v));
  }
}

TEST_CASE("overlapping refinement without a containing element is not a good cover") {
  MetricSurface tet = testing::with_diameter(fixtures::tetrahedron(), 4);
  std::vector<CoverElement> a = {element(tet, 0, {0, 1, 2}, ElementKind::Refinement),
                                 element(tet, 3, {1, 2, 3}, ElementKind::Refinement)};
  std::vector<CoverElement> b = {element(tet, 0, {0, 1, 2}, ElementKind::Cover),
                                 element(tet, 3, {1, 2, 3}, ElementKind::Cover)};
  CHECK(code_of([&] { certify_cover(tet, a, b, 8, 1); }) == ErrorCode::NotAGoodCover);
}

TEST_CASE("contracting inside a ball") {
  const auto setup = testing::make_setup("icosphere3", 1.0);
  const auto& s = setup.s;
  const CoverElement& e = setup.cert.cover[0];
  CHECK(homotopy_width(s, contract_in_ball(s, point_loop(e.center, 8), e)) == doctest::Approx(0.0));
  const PolyLoop small = random_element_loop(s, setup.cert.refinement[0], 3, 16);
  const CoverElement* host = nullptr;
  for (const auto& b : setup.cert.cover)
    if (b.contains(s, flatten(small)) && b.center_vertex == setup.cert.refinement[0].center_vertex) host = &b;
  REQUIRE(host);
  CHECK(homotopy_width(s, contract_in_ball(s, small, *host)) <= 2 * host->radius + 2 * setup.cert.slack);

  std::vector<SurfacePoint> far = small.samples;
  int outside = 0;
  while (host->contains_vertex(outside)) ++outside;
  far[2] = s.vertex_point(outside);
  CHECK(code_of([&] { contract_in_ball(s, make_loop(s, far), *host); }) == ErrorCode::LoopEscapesElement);
}

TEST_CASE("nerve of a single element") {
  MetricSurface tet = testing::with_diameter(fixtures::tetrahedron(), 4);
  const auto cert = certify_cover(tet, {element(tet, 0, {0, 1, 2, 3}, ElementKind::Refinement)},
                                  {element(tet, 0, {0, 1, 2, 3}, ElementKind::Cover)}, 8, 1);
  const NerveGraph g = build_nerve(tet, cert);
  CHECK(g.vertex_count() == 1);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("nerve shape on an icosphere cover") {
  const auto setup = testing::make_setup("icosphere3", 1.0);
  const auto& g = setup.nerve;
  const int N = setup.cert.N;
  CHECK(g.vertex_count() == static_cast<int>(setup.cert.refinement.size()));
  CHECK(g.vertex_count() <= N);
  CHECK(g.edge_count() <= N * (N - 1) / 2);
  for (const auto& e : g.edges) {
    CHECK(e.i < e.j);
    CHECK(path_length(setup.s, e.curve) <= 2 * setup.cert.F_A + 1e-9);
    CHECK(e.length == doctest::Approx(path_length(setup.s, e.curve)));
  }
  // Elements sharing a vertex form a clique.
  for (int v = 0; v < setup.s.vertex_count(); ++v) {
    const auto& here = setup.cert.vertex_refinement[v];
    for (int a : here)
      for (int b : here)
        if (a < b) CHECK(g.adjacent(a, b));
  }
}

TEST_CASE("canonical forms") {
  CHECK(canonical_form({{2, 0, 1}}).vertices == std::vector<int>{0, 1, 2});
  CHECK(canonical_form({{0, 2, 1}}).vertices == std::vector<int>{0, 1, 2});
  CHECK(canonical_form({{0, 2, 1}}, false).vertices == std::vector<int>{0, 2, 1});
  CHECK(canonical_form({{4}}).vertices == std::vector<int>{4});

  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    SimplicialLoop a;
    const int m = 2 + static_cast<int>(rng() % 7);
    for (int i = 0; i < m; ++i) a.vertices.push_back(static_cast<int>(rng() % 5));
    const SimplicialLoop c = canonical_form(a);
    CHECK(canonical_form(c) == c);
    SimplicialLoop rotated = a;
    std::rotate(rotated.vertices.begin(), rotated.vertices.begin() + 1, rotated.vertices.end());
    CHECK(canonical_form(rotated) == c);
    SimplicialLoop rev = a;
    std::reverse(rev.vertices.begin(), rev.vertices.end());
    CHECK(canonical_form(rev) == c);
  }
}

TEST_CASE("loop enumeration on tiny graphs") {
  const NerveGraph edge = abstract_nerve(2, {{0, 1}});
  const LoopCensus e2 = enumerate_loops(edge, 2);
  CHECK(e2.count() == 3);
  CHECK(e2.count() <= 25);

  const NerveGraph tri = abstract_nerve(3, {{0, 1}, {1, 2}, {0, 2}});
  const LoopCensus t3 = enumerate_loops(tri, 3);
  CHECK(std::count(t3.loops.begin(), t3.loops.end(), SimplicialLoop{{0, 1, 2}}) == 1);
  CHECK(t3.count() == 7);
  CHECK(t3.count() <= 1000);

  const NerveGraph path = abstract_nerve(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(enumerate_loops(path, 1).count() == 4);

  for (const auto& l : t3.loops) CHECK(is_valid_loop(tri, l) == (l.m() != 1));
  CHECK(code_of([&] { enumerate_loops(tri, 3, true, 2); }) == ErrorCode::TooLargeToEnumerate);
}
