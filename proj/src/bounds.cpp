#include "geocontract/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include "json.hpp"

#include "geocontract/errors.hpp"

namespace geocontract {

using Big = boost::multiprecision::cpp_bin_float_50;
using Json = nlohmann::ordered_json;

double depth_bound(double L, double W, double D) { return std::max(2 * L, 2 * W + 2 * D); }

double measure_depth(const MetricSurface& s, const PolyLoop& loop, const DiscreteHomotopy& h) {
  const double L = loop_length(s, loop);
  double extra = 0;
  for (const auto& f : h.frames) extra = std::max(extra, loop_length(s, f) - L);
  return extra;
}

double measure_depth(const MetricSurface& s, const ContractionTree& tree, const MarkedContraction& mc) {
  if (tree.nodes.empty()) return 0;
  double whiskers = 0;
  for (const auto& w : mc.marked_trajectories)
    if (!w.empty()) whiskers += path_length(s, w);
  double peak = 0;
  auto scan = [&](const DiscreteHomotopy& h, double pending) {
    for (const auto& f : h.frames) peak = std::max(peak, loop_length(s, f) + pending);
  };
  std::function<void(int, double)> visit = [&](int id, double pending) {
    const TreeNode& n = tree.nodes[id];
    peak = std::max(peak, loop_length(s, n.loop) + pending);
    if (n.entry) scan(*n.entry, pending);
    if (n.kind != StepKind::Leaf) scan(n.lead, pending);
    if (n.split) scan(n.split->homotopy, pending);
    if (n.kind == StepKind::Split) {
      // Pieces contract one after another; later ones wait at full length.
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        double later = 0;
        for (std::size_t j = i + 1; j < n.children.size(); ++j) later += loop_length(s, n.split->pieces[j]);
        visit(n.children[i], pending + later);
      }
    } else {
      for (int c : n.children) visit(c, pending);
    }
  };
  visit(tree.root, 0);
  return std::max(0.0, peak + 2 * whiskers - tree.root_length);
}

double nabutovsky_rotman_length(int k, int m, double D, double S) {
  return ((4.0 * k + 2) * m + (2.0 * k - 3)) * D + (2.0 * m - 1) * S;
}

MainBound main_bound(int n, double D, double S_p) {
  if (n < 2) throw Error(ErrorCode::ConfigError, "n must be at least 2");
  MainBound b;
  b.literal = 10.0 * n + D + (2.0 * n - 1) * S_p;
  b.k2 = nabutovsky_rotman_length(2, n, D, S_p);
  b.A_final = std::max(b.literal, b.k2);
  return b;
}

namespace {

std::string decimal(const Big& v) {
  if (v < Big(1e15)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v.convert_to<double>());
    return buf;
  }
  return v.str(17, std::ios_base::scientific);
}

Big bigger(const Big& a, const Big& b) { return a < b ? b : a; }

}  // namespace

void derive_bounds(BoundsReport& r, std::optional<double> S_p_override) {
  r.F = std::max(r.F_A, r.F_B);
  r.G_sigma = g_sigma(r.F_A, r.G);
  r.Y = 2 * r.G_sigma;
  r.m = r.n;
  r.k = 2;
  const WidthBound B = total_width_bound(r.N, r.X, r.D_hat, r.Y, r.measured_W);
  r.B = B.decimal;
  r.B_log10 = B.log10;
  const Big Bbig = pow(Big(double(r.N) * r.N + 1), r.X) * (Big(7) * r.D_hat + Big(2) * r.Y + r.measured_W);
  const Big Sbound = bigger(Big(6) * r.D_hat, Big(2) * Bbig + Big(2) * r.D_hat);
  r.S_p_bound = decimal(Sbound);
  r.S_p_measured.reset();
  if (r.measured_total_width) r.S_p_measured = depth_bound(3 * r.D_hat, *r.measured_total_width, r.D_hat);
  if (S_p_override) {
    r.S_p = *S_p_override;
    r.S_p_source = "override";
  } else if (r.S_p_measured) {
    r.S_p = *r.S_p_measured;
    r.S_p_source = "measured";
  } else {
    r.S_p = Sbound < Big(1e300) ? Sbound.convert_to<double>() : 1e300;
    r.S_p_source = "bound";
  }
  const MainBound A = main_bound(r.n, r.D_hat, r.S_p);
  r.F_main = A.literal;
  r.L_thm4 = A.k2;
  r.A_final = A.A_final;
  const Big lit = Big(10) * r.n + r.D_hat + Big(2 * r.n - 1) * Sbound;
  const Big k2 = Big(10 * r.n + 1) * r.D_hat + Big(2 * r.n - 1) * Sbound;
  r.A_theory = decimal(bigger(lit, k2));
  r.within_preset_constants = r.F <= 3 * r.D_hat && r.G <= 21 * r.D_hat;
  r.B_preset = total_width_bound(r.N, r.X, r.D_hat, 2 * g_sigma(3 * r.D_hat, 21 * r.D_hat), r.measured_W).decimal;
}

namespace {

template <class T>
void put_optional(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
std::optional<T> get_optional(const Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

std::string emit_report(const BoundsReport& r, const Provenance& p) {
  Json j;
  j["n"] = r.n;
  j["D_hat"] = r.D_hat;
  j["area"] = r.area;
  j["N"] = r.N;
  j["F_A"] = r.F_A;
  j["F_B"] = r.F_B;
  j["F"] = r.F;
  j["G"] = r.G;
  j["G_sigma"] = r.G_sigma;
  j["Y"] = r.Y;
  j["X"] = r.X;
  j["Z_hat"] = r.Z_hat;
  j["measured_W"] = r.measured_W;
  put_optional(j, "measured_delta", r.measured_delta);
  j["N0"] = r.N0;
  j["B"] = r.B;
  j["B_log10"] = r.B_log10;
  j["S_p_bound"] = r.S_p_bound;
  put_optional(j, "S_p_measured", r.S_p_measured);
  j["S_p"] = r.S_p;
  j["S_p_source"] = r.S_p_source;
  j["k"] = r.k;
  j["m"] = r.m;
  j["L_thm4"] = r.L_thm4;
  j["F_main"] = r.F_main;
  j["A_final"] = r.A_final;
  j["A_theory"] = r.A_theory;
  put_optional(j, "shortest_geodesic_found", r.shortest_geodesic_found);
  if (r.shortest_geodesic_found && r.A_final > 0) j["geodesic_to_A_ratio"] = *r.shortest_geodesic_found / r.A_final;
  put_optional(j, "measured_total_width", r.measured_total_width);
  put_optional(j, "measured_depth", r.measured_depth);
  j["within_preset_constants"] = r.within_preset_constants;
  j["B_preset"] = r.B_preset;
  Json prov;
  prov["mesh"] = p.mesh;
  prov["mesh_hash"] = p.mesh_hash;
  prov["seed"] = p.seed;
  try {
    prov["config"] = Json::parse(p.config_json);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SerializationError, std::string("bad config JSON: ") + e.what());
  }
  j["provenance"] = prov;
  return j.dump(2) + "\n";
}

std::pair<BoundsReport, Provenance> parse_report(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    BoundsReport r;
    r.n = j.at("n").get<int>();
    r.D_hat = j.at("D_hat").get<double>();
    r.area = j.at("area").get<double>();
    r.N = j.at("N").get<int>();
    r.F_A = j.at("F_A").get<double>();
    r.F_B = j.at("F_B").get<double>();
    r.F = j.at("F").get<double>();
    r.G = j.at("G").get<double>();
    r.G_sigma = j.at("G_sigma").get<double>();
    r.Y = j.at("Y").get<double>();
    r.X = j.at("X").get<int>();
    r.Z_hat = j.at("Z_hat").get<int>();
    r.measured_W = j.at("measured_W").get<double>();
    r.measured_delta = get_optional<double>(j, "measured_delta");
    r.N0 = j.at("N0").get<double>();
    r.B = j.at("B").get<std::string>();
    r.B_log10 = j.at("B_log10").get<double>();
    r.S_p_bound = j.at("S_p_bound").get<std::string>();
    r.S_p_measured = get_optional<double>(j, "S_p_measured");
    r.S_p = j.at("S_p").get<double>();
    r.S_p_source = j.at("S_p_source").get<std::string>();
    r.k = j.at("k").get<int>();
    r.m = j.at("m").get<int>();
    r.L_thm4 = j.at("L_thm4").get<double>();
    r.F_main = j.at("F_main").get<double>();
    r.A_final = j.at("A_final").get<double>();
    r.A_theory = j.at("A_theory").get<std::string>();
    r.shortest_geodesic_found = get_optional<double>(j, "shortest_geodesic_found");
    r.measured_total_width = get_optional<double>(j, "measured_total_width");
    r.measured_depth = get_optional<double>(j, "measured_depth");
    r.within_preset_constants = j.at("within_preset_constants").get<bool>();
    r.B_preset = j.at("B_preset").get<std::string>();
    Provenance p;
    const Json& prov = j.at("provenance");
    p.mesh = prov.at("mesh").get<std::string>();
    p.mesh_hash = prov.at("mesh_hash").get<std::string>();
    p.seed = prov.at("seed").get<std::uint64_t>();
    p.config_json = prov.at("config").dump();
    return {r, p};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SerializationError, std::string("report: ") + e.what());
  }
}

}  // namespace geocontract
