#include "geocontract/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "geocontract/errors.hpp"
#include "geocontract/geodesic.hpp"

namespace geocontract {

using Json = nlohmann::ordered_json;

namespace {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json point_json(const SurfacePoint& p) { return Json{{"face", p.face}, {"bary", p.bary}}; }

SurfacePoint point_from(const MetricSurface& s, const Json& j) {
  SurfacePoint p;
  p.face = j.at("face").get<int>();
  p.bary = j.at("bary").get<std::array<double, 3>>();
  if (p.face < 0 || p.face >= s.face_count()) throw Error(ErrorCode::SerializationError, "face index out of range");
  return p;
}

Json xyz(const MetricSurface& s, const SurfacePoint& p) {
  const Vec3 v = s.position(p);
  return Json::array({v.x, v.y, v.z});
}

Json positions(const MetricSurface& s, const PolyLoop& loop) {
  Json a = Json::array();
  for (const auto& p : loop.samples) a.push_back(xyz(s, p));
  return a;
}

Json loop_object(const MetricSurface& s, const PolyLoop& loop) {
  Json j;
  j["K"] = loop.size();
  j["basepoint"] = loop.basepoint;
  j["length"] = loop_length(s, loop);
  Json samples = Json::array();
  for (const auto& p : loop.samples) samples.push_back(point_json(p));
  j["samples"] = samples;
  j["positions"] = positions(s, loop);
  return j;
}

Json element_json(const CoverElement& e) {
  return Json{{"center_vertex", e.center_vertex},
              {"center", point_json(e.center)},
              {"radius", e.radius},
              {"eccentricity", e.eccentricity},
              {"members", e.members}};
}

CoverElement element_from(const MetricSurface& s, const Json& j, ElementKind kind) {
  CoverElement e;
  e.center_vertex = j.at("center_vertex").get<int>();
  e.center = point_from(s, j.at("center"));
  e.radius = j.at("radius").get<double>();
  e.kind = kind;
  e.members = j.at("members").get<std::vector<int>>();
  for (int v : e.members)
    if (v < 0 || v >= s.vertex_count()) throw Error(ErrorCode::SerializationError, "member vertex out of range");
  if (!std::is_sorted(e.members.begin(), e.members.end()))
    throw Error(ErrorCode::SerializationError, "element members must be sorted");
  index_element(s, e);
  return e;
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SerializationError, std::string(what) + ": " + e.what());
  }
}

const char* kind_name(StepKind k) {
  switch (k) {
    case StepKind::Leaf: return "leaf";
    case StepKind::Single: return "single";
    case StepKind::Split: return "split";
  }
  return "leaf";
}

}  // namespace

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string surface_summary_json(const MetricSurface& s, const std::string& mesh, int diameter_samples,
                                 std::uint64_t seed) {
  Json j;
  j["mesh"] = mesh;
  j["mesh_hash"] = hash_hex(s.content_hash());
  j["vertices"] = s.vertex_count();
  j["faces"] = s.face_count();
  j["edges"] = s.edge_count();
  j["euler_characteristic"] = s.vertex_count() - s.edge_count() + s.face_count();
  j["area"] = s.area();
  j["min_edge"] = s.min_edge_length();
  j["max_edge"] = s.max_edge_length();
  j["epsilon"] = s.epsilon();
  if (s.diameter()) j["D_hat"] = *s.diameter();
  j["diameter_samples"] = diameter_samples;
  j["seed"] = seed;
  return dump(j);
}

std::string loop_json(const MetricSurface& s, const PolyLoop& loop) { return dump(loop_object(s, loop)); }

PolyLoop loop_from_json(const MetricSurface& s, const std::string& text) {
  return guarded("loop", [&] {
    const Json j = Json::parse(text);
    std::vector<SurfacePoint> pts;
    for (const auto& p : j.at("samples")) pts.push_back(point_from(s, p));
    if (pts.empty()) throw Error(ErrorCode::SerializationError, "loop without samples");
    PolyLoop loop = make_loop(s, std::move(pts));
    loop.basepoint = j.value("basepoint", 0);
    return loop;
  });
}

std::string certificate_json(const GoodCoverCertificate& c) {
  Json j;
  j["N"] = c.N;
  j["F_A"] = c.F_A;
  j["F_B"] = c.F_B;
  j["F"] = c.F;
  j["G"] = c.G;
  j["G_sampled"] = c.G_sampled;
  j["G_trials"] = c.G_trials;
  j["pair_trials"] = c.pair_trials;
  j["slack"] = c.slack;
  j["seed"] = c.seed;
  Json a = Json::array(), b = Json::array(), pairs = Json::array();
  for (const auto& e : c.refinement) a.push_back(element_json(e));
  for (const auto& e : c.cover) b.push_back(element_json(e));
  for (const auto& [key, k] : c.pairing) pairs.push_back(Json::array({key.first, key.second, k}));
  j["refinement"] = a;
  j["cover"] = b;
  j["pairing"] = pairs;
  return dump(j);
}

GoodCoverCertificate certificate_from_json(const MetricSurface& s, const std::string& text) {
  return guarded("certificate", [&] {
    const Json j = Json::parse(text);
    GoodCoverCertificate c;
    c.N = j.at("N").get<int>();
    c.F_A = j.at("F_A").get<double>();
    c.F_B = j.at("F_B").get<double>();
    c.F = j.at("F").get<double>();
    c.G = j.at("G").get<double>();
    c.G_sampled = j.at("G_sampled").get<double>();
    c.G_trials = j.at("G_trials").get<int>();
    c.pair_trials = j.at("pair_trials").get<int>();
    c.slack = j.at("slack").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("refinement")) c.refinement.push_back(element_from(s, e, ElementKind::Refinement));
    for (const auto& e : j.at("cover")) c.cover.push_back(element_from(s, e, ElementKind::Cover));
    const int n = static_cast<int>(c.refinement.size());
    for (const auto& p : j.at("pairing")) {
      const int a = p.at(0).get<int>(), b = p.at(1).get<int>(), k = p.at(2).get<int>();
      if (a < 0 || b < a || b >= n || k < 0 || k >= static_cast<int>(c.cover.size()))
        throw Error(ErrorCode::SerializationError, "pairing entry out of range");
      c.pairing[{a, b}] = k;
    }
    c.vertex_refinement.assign(s.vertex_count(), {});
    for (int i = 0; i < n; ++i)
      for (int v : c.refinement[i].members) c.vertex_refinement[v].push_back(i);
    return c;
  });
}

std::string nerve_json(const NerveGraph& g, int Z_hat, int X, double N0) {
  Json j;
  j["vertices"] = g.vertex_count();
  j["edge_count"] = g.edge_count();
  j["Z_hat"] = Z_hat;
  j["X"] = X;
  j["N0"] = N0;
  j["center_vertex"] = g.center_vertex;
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back(Json{{"i", e.i}, {"j", e.j}, {"length", e.length}});
  j["edges"] = edges;
  return dump(j);
}

std::string geodesic_search_json(const MetricSurface& s, const GeodesicSearch& search, int budget,
                                 std::uint64_t seed) {
  Json j;
  j["budget"] = budget;
  j["seed"] = seed;
  j["found"] = search.candidate.has_value();
  if (search.candidate) {
    j["length"] = search.length;
    j["candidate"] = loop_object(s, *search.candidate);
  }
  Json runs = Json::array();
  for (const auto& r : search.runs) {
    Json x{{"kind", r.kind}, {"initial_length", r.initial_length}};
    x["status"] = r.status ? Json(status_name(*r.status)) : Json(nullptr);
    x["final_length"] = r.final_length;
    x["iterations"] = r.iterations;
    runs.push_back(x);
  }
  j["runs"] = runs;
  return dump(j);
}

std::optional<double> geodesic_length_from_json(const std::string& text) {
  return guarded("geodesic", [&]() -> std::optional<double> {
    const Json j = Json::parse(text);
    if (!j.at("found").get<bool>()) return std::nullopt;
    return j.at("length").get<double>();
  });
}

std::string contraction_json(const MetricSurface& s, const ContractResult& r) {
  Json j;
  j["measured_width"] = r.measured_width;
  double depth = 0;
  for (std::size_t t = 0; t < r.trees.size(); ++t) depth = std::max(depth, measure_depth(s, r.trees[t], r.contractions[t]));
  j["measured_depth"] = depth;
  double delta = r.pre_break ? r.pre_break->measured_delta : std::numeric_limits<double>::infinity();
  for (const auto& t : r.trees) delta = std::min(delta, t.min_break_delta());
  if (std::isfinite(delta)) j["measured_delta"] = delta;
  j["B"] = r.bound.decimal;
  j["B_log10"] = r.bound.log10;
  j["N0"] = r.N0;
  j["Y"] = r.Y;
  j["W"] = r.W;
  if (r.pre_break) {
    j["pre_break"] = Json{{"pieces", r.pre_break->pieces.size()},
                          {"measured_W", r.pre_break->measured_W},
                          {"measured_delta", r.pre_break->measured_delta},
                          {"piece_m", r.pre_break->piece_m}};
  }
  Json trees = Json::array();
  for (std::size_t t = 0; t < r.trees.size(); ++t) {
    const ContractionTree& tree = r.trees[t];
    const MarkedContraction& mc = r.contractions[t];
    Json x;
    const auto [h1, h2] = tree.deepest_counts();
    x["height"] = tree.height();
    x["h1"] = h1;
    x["h2"] = h2;
    x["nodes"] = tree.alive_count();
    x["splices"] = tree.splices;
    x["root_length"] = tree.root_length;
    x["block_width"] = tree.block_width;
    Json nodes = Json::array();
    for (const auto& n : tree.nodes) {
      if (!n.alive) continue;
      Json y;
      y["id"] = n.id;
      y["parent"] = n.parent;
      y["kind"] = kind_name(n.kind);
      y["m"] = n.alpha.m();
      y["canonical"] = n.canonical.vertices;
      y["generation"] = n.generation;
      y["length"] = loop_length(s, n.loop);
      y["step_width"] = n.step_width();
      if (n.entry) {
        y["spliced_from"] = n.spliced_from;
        y["entry_width"] = n.entry_width;
      }
      if (n.split) {
        y["break_W"] = n.split->measured_W;
        y["break_delta"] = n.split->measured_delta;
        y["piece_m"] = n.split->piece_m;
      }
      y["children"] = n.children;
      y["positions"] = positions(s, n.loop);
      nodes.push_back(y);
    }
    x["tree"] = nodes;
    Json m;
    m["width"] = mc.width;
    m["bound"] = mc.bound;
    m["h1_used"] = mc.h1_used;
    m["h2_used"] = mc.h2_used;
    m["entries_used"] = mc.entries_used;
    m["whisker_retraction"] = mc.whisker_retraction;
    Json stages = Json::array();
    for (const auto& st : mc.stages)
      stages.push_back(Json{{"node", st.node},
                            {"kind", kind_name(st.kind)},
                            {"homotopy_width", st.homotopy_width},
                            {"sigma_length", st.sigma_length},
                            {"width", st.width}});
    m["stages"] = stages;
    x["marked"] = m;
    trees.push_back(x);
  }
  j["trees"] = trees;
  return dump(j);
}

}  // namespace geocontract
