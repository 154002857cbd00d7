#include "geocontract/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "geocontract/bounds.hpp"
#include "geocontract/fixtures.hpp"
#include "geocontract/geodesic.hpp"
#include "geocontract/mesh_io.hpp"
#include "geocontract/render.hpp"
#include "geocontract/serialize.hpp"

namespace geocontract {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::ConfigError, what);
}

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <class T>
void take(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::ConfigError, std::string("bad value for '") + key + "'");
  }
}

template <class T>
void take(const Json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  T v{};
  take(j, key, v);
  out = v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Json parse(const fs::path& p) {
  try {
    return Json::parse(read_file(p));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SerializationError, p.filename().string() + ": " + e.what());
  }
}

fs::path need(const fs::path& dir, const char* name, const char* producer) {
  fs::path p = dir / name;
  if (!fs::exists(p))
    throw Error(ErrorCode::MissingArtifact, std::string(name) + " not found in " + dir.string() + "; run '" +
                                                producer + "' first");
  return p;
}

MetricSurface load_mesh(const RunConfig& cfg) {
  require(!cfg.mesh.empty(), "no mesh given");
  MetricSurface s = fs::exists(cfg.mesh) ? load_surface_file(cfg.mesh) : fixtures::by_name(cfg.mesh);
  if (cfg.epsilon) s.set_epsilon(*cfg.epsilon);
  return s;
}

// Mesh of an ingested run, with the recorded diameter restored.
MetricSurface open_surface(const RunConfig& cfg, const fs::path& dir) {
  const Json summary = parse(need(dir, artifact::surface, "ingest"));
  MetricSurface s = load_mesh(cfg);
  if (hash_hex(s.content_hash()) != summary.at("mesh_hash").get<std::string>())
    throw Error(ErrorCode::ConfigError, "mesh differs from the one ingested into " + dir.string());
  s.set_diameter(summary.at("D_hat").get<double>());
  return s;
}

BpflConfig bpfl_config(const RunConfig& cfg) {
  BpflConfig b;
  if (cfg.rho) b.rho = *cfg.rho;
  b.stall_window = cfg.stall_window;
  b.stall_tol = cfg.stall_tol;
  return b;
}

PolyLoop loop_from_config(const MetricSurface& s, const RunConfig& cfg, const fs::path& dir) {
  const std::string& desc = cfg.loop;
  if (desc.rfind("plane:", 0) == 0) {
    std::vector<double> v;
    std::stringstream in(desc.substr(6));
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        v.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError, "bad number in loop description: " + tok);
      }
    }
    require(v.size() == 4, "plane loop description needs nx,ny,nz,c");
    const Vec3 n{v[0], v[1], v[2]};
    require(norm(n) > 0, "plane normal must be nonzero");
    auto loop = plane_section(s, n * (1.0 / norm(n)), v[3], cfg.samples);
    require(loop.has_value(), "plane " + desc.substr(6) + " misses the surface");
    return *loop;
  }
  if (desc.rfind("file:", 0) == 0) {
    const fs::path p = desc.substr(5);
    if (!fs::exists(p)) throw Error(ErrorCode::MissingArtifact, "loop file " + p.string() + " not found");
    return loop_from_json(s, read_file(p));
  }
  if (desc == "geodesic") {
    const Json g = parse(need(dir, artifact::geodesic, "geodesic"));
    if (!g.at("found").get<bool>()) throw Error(ErrorCode::MissingArtifact, "geodesic search found no candidate");
    return loop_from_json(s, g.at("candidate").dump());
  }
  throw Error(ErrorCode::ConfigError, "unknown loop description '" + desc + "'");
}

std::optional<GeodesicSearch> stored_search(const MetricSurface& s, const fs::path& dir) {
  if (!fs::exists(dir / artifact::geodesic)) return std::nullopt;
  const Json g = parse(dir / artifact::geodesic);
  GeodesicSearch out;
  if (g.at("found").get<bool>()) {
    out.candidate = loop_from_json(s, g.at("candidate").dump());
    out.length = g.at("length").get<double>();
  }
  return out;
}

std::vector<Vec3> points_of(const Json& positions) {
  std::vector<Vec3> out;
  for (const auto& p : positions) out.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
  return out;
}

}  // namespace

void RunConfig::validate() const {
  require(!epsilon || (*epsilon > 0 && *epsilon <= 1), "epsilon must lie in (0, 1]");
  require(samples >= 3 && samples <= 4096, "samples must lie in [3, 4096]");
  require(!radius || *radius > 0, "radius must be positive");
  require(!X || (*X >= 1 && *X <= 64), "X must lie in [1, 64]");
  require(!rho || *rho > 0, "rho must be positive");
  require(stall_window >= 1 && stall_window <= 10000, "stall_window must lie in [1, 10000]");
  require(stall_tol > 0 && stall_tol < 1, "stall_tol must lie in (0, 1)");
  require(preset.empty() || preset == "lemma2_10", "unknown preset '" + preset + "'");
  require(n >= 2 && n <= 1000, "n must lie in [2, 1000]");
  require(budget >= 1 && budget <= 4096, "budget must lie in [1, 4096]");
  require(diameter_samples >= 1, "diameter_samples must be positive");
  require(cover_trials >= 1, "cover_trials must be positive");
  require(z_trials >= 1, "z_trials must be positive");
  require(!block_width || *block_width > 0, "block_width must be positive");
  require(!sp || *sp >= 0, "sp must be nonnegative");
}

std::string RunConfig::to_json() const {
  Json j;
  j["mesh"] = mesh;
  j["epsilon"] = opt(epsilon);
  j["samples"] = samples;
  j["radius"] = opt(radius);
  j["seed"] = seed;
  j["X"] = opt(X);
  j["rho"] = opt(rho);
  j["stall_window"] = stall_window;
  j["stall_tol"] = stall_tol;
  j["preset"] = preset;
  j["n"] = n;
  j["budget"] = budget;
  j["diameter_samples"] = diameter_samples;
  j["cover_trials"] = cover_trials;
  j["z_trials"] = z_trials;
  j["loop"] = loop;
  j["check_hypothesis"] = check_hypothesis;
  j["block_width"] = opt(block_width);
  j["sp"] = opt(sp);
  return j.dump(2) + "\n";
}

void RunConfig::merge_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config is not JSON: ") + e.what());
  }
  require(j.is_object(), "config must be a JSON object");
  static const char* known[] = {"mesh",         "epsilon", "samples",          "radius",       "seed",
                                "X",            "rho",     "stall_window",     "stall_tol",    "preset",
                                "n",            "budget",  "diameter_samples", "cover_trials", "z_trials",
                                "loop",         "check_hypothesis", "block_width", "sp"};
  for (const auto& [key, value] : j.items())
    require(std::find(std::begin(known), std::end(known), key) != std::end(known), "unknown config key '" + key + "'");
  take(j, "mesh", mesh);
  take(j, "epsilon", epsilon);
  take(j, "samples", samples);
  take(j, "radius", radius);
  take(j, "seed", seed);
  take(j, "X", X);
  take(j, "rho", rho);
  take(j, "stall_window", stall_window);
  take(j, "stall_tol", stall_tol);
  take(j, "preset", preset);
  take(j, "n", n);
  take(j, "budget", budget);
  take(j, "diameter_samples", diameter_samples);
  take(j, "cover_trials", cover_trials);
  take(j, "z_trials", z_trials);
  take(j, "loop", loop);
  take(j, "check_hypothesis", check_hypothesis);
  take(j, "block_width", block_width);
  take(j, "sp", sp);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingArtifact, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::SerializationError, "cannot write " + p.string());
}

std::string cmd_ingest(const RunConfig& cfg, const fs::path& dir) {
  cfg.validate();
  MetricSurface s = load_mesh(cfg);
  const double D = estimate_diameter(s, cfg.diameter_samples, cfg.seed);
  write_file(dir / artifact::surface, surface_summary_json(s, cfg.mesh, cfg.diameter_samples, cfg.seed));
  return "ingested " + cfg.mesh + ": V=" + std::to_string(s.vertex_count()) + " F=" + std::to_string(s.face_count()) +
         " area=" + fmt(s.area()) + " D_hat=" + fmt(D) + "\n";
}

std::string cmd_cover(const RunConfig& cfg, const fs::path& dir) {
  cfg.validate();
  MetricSurface s = open_surface(cfg, dir);
  const double r = cfg.radius.value_or(*s.diameter() / 3);
  BallCover bc = build_ball_cover(s, r, cfg.seed);
  GoodCoverCertificate cert =
      certify_cover(s, std::move(bc.refinement), std::move(bc.cover), cfg.cover_trials, cfg.seed + 1, cfg.samples);
  write_file(dir / artifact::certificate, certificate_json(cert));
  return "cover r=" + fmt(r) + ": N=" + std::to_string(cert.N) + " F_A=" + fmt(cert.F_A) + " F_B=" + fmt(cert.F_B) +
         " G=" + fmt(cert.G) + "\n";
}

std::string cmd_nerve(const RunConfig& cfg, const fs::path& dir) {
  cfg.validate();
  MetricSurface s = open_surface(cfg, dir);
  const GoodCoverCertificate cert = certificate_from_json(s, read_file(need(dir, artifact::certificate, "cover")));
  const NerveGraph g = build_nerve(s, cert);
  const int Z = measure_Z(s, cert, cfg.z_trials, cfg.seed + 2, cfg.samples);
  const int X = cfg.X.value_or(std::max(1, 2 * Z));
  const double N0 = loop_class_bound(g, X, cert.N);
  write_file(dir / artifact::nerve, nerve_json(g, Z, X, N0));
  return "nerve: " + std::to_string(g.vertex_count()) + " vertices, " + std::to_string(g.edge_count()) +
         " edges, Z_hat=" + std::to_string(Z) + " X=" + std::to_string(X) + " N0=" + fmt(N0) + "\n";
}

std::string cmd_geodesic(const RunConfig& cfg, const fs::path& dir) {
  cfg.validate();
  MetricSurface s = open_surface(cfg, dir);
  const GeodesicSearch g = find_shortest_geodesic(s, cfg.budget, cfg.seed + 3, bpfl_config(cfg), cfg.samples);
  write_file(dir / artifact::geodesic, geodesic_search_json(s, g, cfg.budget, cfg.seed + 3));
  if (!g.candidate) return "geodesic: no candidate over " + std::to_string(cfg.budget) + " seeds\n";
  return "geodesic: shortest candidate " + fmt(g.length) + " (3 D_hat = " + fmt(3 * *s.diameter()) + ")\n";
}

std::string cmd_contract(const RunConfig& cfg, const fs::path& dir) {
  cfg.validate();
  MetricSurface s = open_surface(cfg, dir);
  const GoodCoverCertificate cert = certificate_from_json(s, read_file(need(dir, artifact::certificate, "cover")));
  const Json nj = parse(need(dir, artifact::nerve, "nerve"));
  const NerveGraph g = build_nerve(s, cert);
  const PolyLoop loop = loop_from_config(s, cfg, dir);

  ContractConfig cc;
  cc.X = nj.at("X").get<int>();
  cc.bpfl = bpfl_config(cfg);
  if (cfg.block_width) cc.block_width = *cfg.block_width;
  cc.geodesic_budget = cfg.budget;
  cc.seed = cfg.seed + 3;
  cc.check_hypothesis = cfg.check_hypothesis;
  const std::optional<GeodesicSearch> stored = stored_search(s, dir);
  if (stored) cc.hypothesis = &*stored;

  fs::remove(dir / artifact::hypothesis);
  ContractResult r;
  try {
    r = contract_with_certificate(s, loop, cert, g, cc);
  } catch (const HypothesisViolation& e) {
    Json j;
    j["error"] = "HypothesisViolated";
    j["length"] = e.length();
    j["three_D_hat"] = 3 * *s.diameter();
    j["geodesic"] = Json::parse(loop_json(s, e.geodesic()));
    write_file(dir / artifact::hypothesis, j.dump(2) + "\n");
    throw;
  }
  write_file(dir / artifact::contraction, contraction_json(s, r));
  std::string out = "contract: loop length " + fmt(loop_length(s, loop)) + ", " + std::to_string(r.trees.size()) +
                    " tree(s), measured width " + fmt(r.measured_width) + " <= B = " + r.bound.decimal + "\n";
  return out + cmd_bounds(cfg, dir);
}

std::string cmd_bounds(const RunConfig& cfg, const fs::path& dir) {
  cfg.validate();
  const Json surface = parse(need(dir, artifact::surface, "ingest"));
  const Json cert = parse(need(dir, artifact::certificate, "cover"));
  const Json nerve = parse(need(dir, artifact::nerve, "nerve"));

  BoundsReport r;
  r.n = cfg.n;
  r.D_hat = surface.at("D_hat").get<double>();
  r.area = surface.at("area").get<double>();
  r.N = cert.at("N").get<int>();
  r.F_A = cert.at("F_A").get<double>();
  r.F_B = cert.at("F_B").get<double>();
  r.G = cert.at("G").get<double>();
  r.X = nerve.at("X").get<int>();
  r.Z_hat = nerve.at("Z_hat").get<int>();
  r.N0 = nerve.at("N0").get<double>();
  if (fs::exists(dir / artifact::contraction)) {
    const Json c = parse(dir / artifact::contraction);
    r.measured_W = c.at("W").get<double>();
    if (c.contains("measured_delta")) r.measured_delta = c.at("measured_delta").get<double>();
    r.measured_total_width = c.at("measured_width").get<double>();
    r.measured_depth = c.at("measured_depth").get<double>();
  }
  if (fs::exists(dir / artifact::geodesic)) r.shortest_geodesic_found = geodesic_length_from_json(read_file(dir / artifact::geodesic));
  derive_bounds(r, cfg.sp);

  Provenance p;
  p.mesh = cfg.mesh;
  p.mesh_hash = surface.at("mesh_hash").get<std::string>();
  p.seed = cfg.seed;
  p.config_json = cfg.to_json();
  write_file(dir / artifact::report, emit_report(r, p));

  std::string out = "bounds: B=" + r.B + " S_p=" + fmt(r.S_p) + " (" + r.S_p_source + ") A_final=" + fmt(r.A_final) +
                    " [literal " + fmt(r.F_main) + ", k=2 " + fmt(r.L_thm4) + "]\n";
  if (r.shortest_geodesic_found) out += "  shortest geodesic " + fmt(*r.shortest_geodesic_found) + "\n";
  if (cfg.preset == "lemma2_10")
    out += std::string("  preset F=3D, G=21D: ") + (r.within_preset_constants ? "within" : "outside") +
           ", B_preset=" + r.B_preset + "\n";
  return out;
}

std::string cmd_render(const RunConfig& cfg, const fs::path& dir) {
  cfg.validate();
  MetricSurface s = open_surface(cfg, dir);
  std::string out;
  auto emit = [&](const char* name, const std::vector<Overlay>& overlays, const std::string& title) {
    RenderOptions opt;
    opt.title = title;
    write_file(dir / name, render_svg(s, overlays, opt));
    out += std::string("render: ") + name + "\n";
  };
  emit("mesh.svg", {}, cfg.mesh);
  if (fs::exists(dir / artifact::geodesic)) {
    const Json g = parse(dir / artifact::geodesic);
    if (g.at("found").get<bool>())
      emit("geodesic.svg", {Overlay{points_of(g.at("candidate").at("positions")), "#d62728", 2.5, true}},
           "shortest closed geodesic candidate, length " + fmt(g.at("length").get<double>()));
  }
  if (fs::exists(dir / artifact::hypothesis)) {
    const Json h = parse(dir / artifact::hypothesis);
    emit("hypothesis_violation.svg", {Overlay{points_of(h.at("geodesic").at("positions")), "#9467bd", 2.5, true}},
         "closed geodesic within 3 D_hat, length " + fmt(h.at("length").get<double>()));
  }
  if (fs::exists(dir / artifact::contraction)) {
    static const char* palette[] = {"#d62728", "#ff7f0e", "#2ca02c", "#1f77b4", "#9467bd", "#8c564b"};
    const Json c = parse(dir / artifact::contraction);
    std::vector<Overlay> frames;
    for (const auto& tree : c.at("trees"))
      for (const auto& node : tree.at("tree")) {
        if (frames.size() >= 48) break;
        const int gen = node.at("generation").get<int>();
        frames.push_back(Overlay{points_of(node.at("positions")), palette[gen % 6], gen == 0 ? 2.5 : 1.2, true});
      }
    emit("contraction.svg", frames, "contraction tree loops, measured width " + fmt(c.at("measured_width").get<double>()));
  }
  return out;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError: return 2;
    case ErrorCode::MissingArtifact: return 3;
    case ErrorCode::HypothesisViolated: return 4;
    case ErrorCode::NotAGoodCover:
    case ErrorCode::RadiusTooSmall:
    case ErrorCode::DisconnectedElement:
    case ErrorCode::EdgeTooLong: return 5;
    case ErrorCode::ParseError:
    case ErrorCode::TopologyError:
    case ErrorCode::SerializationError: return 7;
    case ErrorCode::FrameMismatch:
    case ErrorCode::LoopEscapesElement:
    case ErrorCode::TooLargeToEnumerate:
    case ErrorCode::NoItinerary:
    case ErrorCode::CannotShorten:
    case ErrorCode::ContractViolation:
    case ErrorCode::DifferentApproximations:
    case ErrorCode::BasepointMismatch:
    case ErrorCode::IterationCapExceeded:
    case ErrorCode::SingleStepTooWide:
    case ErrorCode::TreeInvariantViolation:
    case ErrorCode::NoDuplicateFound:
    case ErrorCode::WidthBoundViolated: return 6;
  }
  return 1;
}

}  // namespace geocontract
