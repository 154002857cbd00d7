#include "geocontract/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "geocontract/errors.hpp"
#include "geocontract/parallel.hpp"

namespace geocontract {

namespace {

const PolyLoop& effective_loop(const TreeNode& n) { return n.entry ? n.effective : n.loop; }

bool same_samples(const MetricSurface& s, const PolyLoop& a, const PolyLoop& b, double tol) {
  if (a.size() != b.size()) return false;
  for (int j = 0; j < a.size(); ++j)
    if (distance(s.position(a.samples[j]), s.position(b.samples[j])) > tol) return false;
  return true;
}

// True when b lists the samples of a from another start or backwards.
bool reindexed_samples(const MetricSurface& s, const PolyLoop& a, const PolyLoop& b, double tol) {
  const int K = a.size();
  if (K != b.size()) return false;
  for (int rev = 0; rev < 2; ++rev)
    for (int shift = 0; shift < K; ++shift) {
      bool ok = true;
      for (int i = 0; i < K && ok; ++i) {
        int src = rev ? (((K - i) % K) + shift) % K : (i + shift) % K;
        ok = distance(s.position(b.samples[i]), s.position(a.samples[src])) <= tol;
      }
      if (ok) return true;
    }
  return false;
}

}  // namespace

int ContractionTree::alive_count() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.alive; }));
}

std::vector<std::vector<int>> ContractionTree::paths() const {
  std::vector<std::vector<int>> out;
  if (nodes.empty()) return out;
  std::vector<int> path;
  std::function<void(int)> walk = [&](int id) {
    path.push_back(id);
    if (nodes[id].children.empty()) out.push_back(path);
    for (int c : nodes[id].children) walk(c);
    path.pop_back();
  };
  walk(root);
  return out;
}

int ContractionTree::height() const {
  int h = 0;
  for (const auto& p : paths()) h = std::max(h, static_cast<int>(p.size()) - 1);
  return h;
}

namespace {

std::pair<int, int> counts_on(const ContractionTree& t, const std::vector<int>& path) {
  int single = 0, multi = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    (t.nodes[path[i]].kind == StepKind::Split ? multi : single)++;
  return {single, multi};
}

const std::vector<int>* deepest(const std::vector<std::vector<int>>& paths) {
  const std::vector<int>* best = nullptr;
  for (const auto& p : paths)
    if (!best || p.size() > best->size()) best = &p;
  return best;
}

}  // namespace

std::pair<int, int> ContractionTree::deepest_counts() const {
  auto all = paths();
  const auto* p = deepest(all);
  return p ? counts_on(*this, *p) : std::pair{0, 0};
}

std::pair<int, int> ContractionTree::max_counts() const {
  int a = 0, b = 0;
  for (const auto& p : paths()) {
    auto [x, y] = counts_on(*this, p);
    a = std::max(a, x);
    b = std::max(b, y);
  }
  return {a, b};
}

int ContractionTree::max_entries() const {
  int best = 0;
  for (const auto& p : paths())
    best = std::max(best, static_cast<int>(std::count_if(p.begin(), p.end(),
                                                         [&](int id) { return nodes[id].entry.has_value(); })));
  return best;
}

double ContractionTree::max_break_W() const {
  double w = 0;
  for (const auto& n : nodes)
    if (n.alive && n.split) w = std::max(w, n.split->measured_W);
  return w;
}

double ContractionTree::min_break_delta() const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& n : nodes)
    if (n.alive && n.split) d = std::min(d, n.split->measured_delta);
  return d;
}

TreeCheck check_tree(const MetricSurface& s, const ContractionTree& tree, double Y) {
  TreeCheck c;
  const double tol = 1e-9 * s.length_scale();
  const double W = tree.max_break_W();
  const double delta = tree.min_break_delta();
  const int max_generations =
      std::isfinite(delta) ? static_cast<int>(std::ceil(tree.root_length / delta)) : 0;
  auto fail = [&](bool& flag, int id, const std::string& what) {
    flag = false;
    c.problems.push_back("node " + std::to_string(id) + ": " + what);
  };
  std::function<void(int)> walk = [&](int id) {
    const TreeNode& n = tree.nodes[id];
    if (!n.alive) fail(c.links, id, "reachable node is marked dead");
    if (n.alpha.m() > tree.X) fail(c.m_within_X, id, "m = " + std::to_string(n.alpha.m()) + " > X");
    if (n.generation > max_generations) fail(c.break_depth, id, "too many break generations");
    const double widen = n.entry ? Y : 0.0;
    if (n.entry) {
      if (!same_samples(s, n.entry->source(), n.loop, tol)) fail(c.links, id, "entry does not start at the loop");
      if (!reindexed_samples(s, n.effective, n.entry->target(), tol))
        fail(c.links, id, "entry does not end at the spliced loop");
    }
    switch (n.kind) {
      case StepKind::Leaf:
        if (!is_point_curve(s, effective_loop(n))) fail(c.leaves_are_points, id, "leaf is not a point curve");
        if (!n.children.empty()) fail(c.links, id, "leaf has children");
        break;
      case StepKind::Single:
        if (n.children.size() != 1) fail(c.links, id, "single step without exactly one child");
        if (n.step_width() > tree.D + widen + tol)
          fail(c.single_widths, id, "single-child width " + std::to_string(n.step_width()));
        break;
      case StepKind::Split:
        if (!n.split || n.children.size() != n.split->pieces.size() || n.children.size() < 2)
          fail(c.links, id, "split without matching pieces");
        if (n.step_width() > tree.D + W + widen + tol)
          fail(c.multi_widths, id, "multi-child width " + std::to_string(n.step_width()));
        break;
    }
    if (n.kind != StepKind::Leaf && !same_samples(s, n.lead.source(), effective_loop(n), tol))
      fail(c.links, id, "step does not start at the node loop");
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const int ch = n.children[i];
      if (ch <= id) fail(c.ids_ordered, id, "child id " + std::to_string(ch) + " not larger");
      if (ch < 0 || ch >= static_cast<int>(tree.nodes.size())) {
        fail(c.links, id, "child id out of range");
        continue;
      }
      if (tree.nodes[ch].parent != id) fail(c.links, ch, "parent link broken");
      const PolyLoop& expect = n.kind == StepKind::Single ? n.lead.target() : n.split->pieces[i];
      if (n.kind != StepKind::Leaf && !same_samples(s, tree.nodes[ch].loop, expect, tol))
        fail(c.links, ch, "child loop differs from the parent's step");
      walk(ch);
    }
  };
  if (!tree.nodes.empty()) walk(tree.root);
  return c;
}

namespace {

struct Grower {
  const MetricSurface& s;
  const GoodCoverCertificate& cert;
  const NerveGraph& nerve;
  const TreeConfig& cfg;
  BpflConfig bpfl;
  double block;

  TreeNode make_node(const PolyLoop& loop, int generation) const {
    TreeNode n;
    n.loop = loop;
    n.alpha = itinerary(s, loop, cert).alpha;
    n.canonical = canonical_form(n.alpha);
    n.generation = generation;
    return n;
  }

  static void merge(std::vector<TreeNode>& into, std::vector<TreeNode> sub, int parent) {
    const int offset = static_cast<int>(into.size());
    for (auto& n : sub) {
      n.id += offset;
      n.parent = n.parent < 0 ? parent : n.parent + offset;
      for (int& c : n.children) c += offset;
      into.push_back(std::move(n));
    }
    into[parent].children.push_back(offset);
  }

  // Local ids: the subtree root is 0 and ids grow in creation order.
  std::vector<TreeNode> grow(const PolyLoop& loop, int generation) const {
    std::vector<TreeNode> nodes;
    nodes.push_back(make_node(loop, generation));
    ShorteningOutcome run = bpfl_contract(s, loop, bpfl);
    if (run.status == ShorteningStatus::StalledAtGeodesic) {
      const double len = loop_length(s, *run.candidate);
      throw HypothesisViolation(*run.candidate, len,
                                "curve shortening stalled at a closed curve of length " + std::to_string(len));
    }
    const std::vector<int> part = partition_by_width(s, run.frames, block);
    int u = 0;
    for (std::size_t j = 1; j < part.size(); ++j) {
      PolyLoop next = run.frames.frames[part[j]];
      TreeNode child = make_node(next, generation);
      DiscreteHomotopy lead = slice_homotopy(run.frames, part[j - 1], part[j]);
      const double w = homotopy_width(s, lead);
      if (child.alpha.m() <= cfg.X) {
        child.id = static_cast<int>(nodes.size());
        child.parent = u;
        nodes[u].kind = StepKind::Single;
        nodes[u].lead = std::move(lead);
        nodes[u].lead_width = w;
        nodes[u].children = {child.id};
        u = child.id;
        nodes.push_back(std::move(child));
        continue;
      }
      BreakResult br = break_loop(s, next, cfg.X, cert, nerve);
      std::vector<std::vector<TreeNode>> subs(br.pieces.size());
      parallel_for(static_cast<int>(subs.size()), [&](int i) { subs[i] = grow(br.pieces[i], generation + 1); });
      nodes[u].kind = StepKind::Split;
      nodes[u].lead = std::move(lead);
      nodes[u].lead_width = w;
      nodes[u].split = std::move(br);
      for (auto& sub : subs) merge(nodes, std::move(sub), u);
      return nodes;
    }
    return nodes;
  }
};

}  // namespace

ContractionTree build_tree(const MetricSurface& s, const PolyLoop& loop, const GoodCoverCertificate& cert,
                           const NerveGraph& nerve, const TreeConfig& cfg) {
  if (cfg.X < 1) throw Error(ErrorCode::ConfigError, "X must be at least 1");
  const double D = cfg.bpfl.D > 0 ? cfg.bpfl.D : s.diameter() ? *s.diameter() : 0;
  if (!(D > 0)) throw Error(ErrorCode::ConfigError, "tree construction needs a diameter");
  Grower g{s, cert, nerve, cfg, cfg.bpfl, cfg.block_width > 0 ? cfg.block_width : D};
  g.bpfl.D = D;
  // Pieces are never longer than the root, so only the root is length-checked.
  g.bpfl.max_length = std::max(cfg.bpfl.max_length > 0 ? cfg.bpfl.max_length : 3 * D + s.point_tolerance(),
                               loop_length(s, loop) * (1 + 1e-12));
  const int m = itinerary(s, loop, cert).alpha.m();
  if (m > cfg.X)
    throw Error(ErrorCode::ContractViolation,
                "tree root needs m <= X (m = " + std::to_string(m) + ", X = " + std::to_string(cfg.X) + ")");
  ContractionTree t;
  t.X = cfg.X;
  t.D = D;
  t.block_width = g.block;
  t.root_length = loop_length(s, loop);
  t.nodes = g.grow(loop, 0);
  return t;
}

MarkedContraction marked_contraction(const MetricSurface& s, const ContractionTree& tree, double D,
                                     double measured_W, double Y) {
  MarkedContraction mc;
  if (tree.nodes.empty()) return mc;
  const TreeCheck check = check_tree(s, tree, std::numeric_limits<double>::infinity());
  if (!check.links || !check.ids_ordered || !check.leaves_are_points)
    throw Error(ErrorCode::TreeInvariantViolation,
                check.problems.empty() ? "malformed tree" : check.problems.front());
  const double tol = std::max(1e-9 * s.length_scale(), s.point_tolerance());
  mc.marked_trajectories.assign(tree.nodes.size(), {});
  mc.marked_index.assign(tree.nodes.size(), -1);

  auto nearest_sample = [&](const PolyLoop& loop, const SurfacePoint& p) {
    const Vec3 x = s.position(p);
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < loop.size(); ++j) {
      double d = distance(s.position(loop.samples[j]), x);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    return best;
  };

  std::function<void(int, int, double, double)> visit = [&](int id, int idx, double stage_sum, double whisker) {
    const TreeNode& n = tree.nodes[id];
    mc.marked_index[id] = idx;
    SurfacePath sigma = constant_path(n.loop.samples[idx]);
    double w = 0;
    if (n.entry) {
      append_path(sigma, trajectory(*n.entry, idx));
      w += n.entry_width;
      idx = nearest_sample(n.effective, n.entry->target().samples[idx]);
    }
    std::vector<std::pair<int, int>> next;  // (child, marked sample)
    if (n.kind != StepKind::Leaf) {
      append_path(sigma, trajectory(n.lead, idx));
      w += n.lead_width;
    }
    if (n.kind == StepKind::Single) {
      next.push_back({n.children[0], idx});
    } else if (n.kind == StepKind::Split) {
      const PolyLoop& g = n.lead.target();
      const double L = loop_length(s, g);
      const double at = sample_offsets(s, g)[idx];
      DiscreteHomotopy rot = rotate_loop_homotopy(s, g, n.split->cut_arcs[0] - at);
      append_path(sigma, trajectory(rot, idx));
      const Vec3 tip = s.position(rot.target().samples[idx]);
      if (distance(tip, s.position(n.split->basepoint)) > tol + 1e-9 * L)
        throw Error(ErrorCode::TreeInvariantViolation, "rotation misses the break point at node " + std::to_string(id));
      w += homotopy_width(s, rot) + n.split->measured_W;
      for (int c : n.children) next.push_back({c, tree.nodes[c].loop.basepoint});
    }
    const double sl = path_length(s, sigma);
    mc.marked_trajectories[id] = std::move(sigma);
    double here = stage_sum;
    if (n.kind != StepKind::Leaf || n.entry) {
      MarkedStage st{id, n.kind, w, sl, std::max(2 * sl, w)};
      here += st.width;
      mc.stages.push_back(st);
    }
    if (next.empty()) {
      mc.whisker_retraction = std::max(mc.whisker_retraction, whisker + sl);
      mc.width = std::max(mc.width, here + whisker + sl);
      return;
    }
    for (auto [c, k] : next) visit(c, k, here, whisker + sl);
  };
  visit(tree.root, tree.nodes[tree.root].loop.basepoint, 0, 0);
  std::tie(mc.h1_used, mc.h2_used) = tree.max_counts();
  mc.entries_used = tree.max_entries();
  mc.bound = 2 * D * mc.h1_used + (5 * D + 2 * measured_W) * mc.h2_used + 2 * Y * mc.entries_used;
  return mc;
}

double loop_class_bound(const NerveGraph& nerve, int X, int N, std::uint64_t cap) {
  const double ceiling = std::pow(double(N) * N + 1, X);
  try {
    return std::min(ceiling, double(enumerate_loops(nerve, X, true, cap).count()));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooLargeToEnumerate) throw;
    return ceiling;
  }
}

ContractionTree reduce_height(const MetricSurface& s, ContractionTree tree, const GoodCoverCertificate& cert,
                              const NerveGraph& nerve, double N0) {
  while (tree.height() > N0) {
    auto all = tree.paths();
    const std::vector<int>& path = *deepest(all);
    int a = -1, b = -1;
    for (std::size_t i = 0; i < path.size() && a < 0; ++i)
      for (std::size_t j = path.size(); j-- > i + 1;)
        if (tree.nodes[path[i]].canonical == tree.nodes[path[j]].canonical) {
          a = static_cast<int>(i);
          b = static_cast<int>(j);
          break;
        }
    if (a < 0)
      throw Error(ErrorCode::NoDuplicateFound, "height " + std::to_string(tree.height()) + " > N0 = " +
                                                   std::to_string(N0) + " but no repeated approximation on the path");
    const int v1 = path[a], v2 = path[b];
    TreeNode& low = tree.nodes[v2];
    PolyLoop target = effective_loop(low);
    DiscreteHomotopy entry = same_approx_homotopy(s, tree.nodes[v1].loop, target, cert, nerve);

    // Everything under v1 except the subtree of v2 drops out.
    std::vector<int> keep;
    std::function<void(int)> mark_keep = [&](int id) {
      keep.push_back(id);
      for (int c : tree.nodes[id].children) mark_keep(c);
    };
    for (int c : low.children) mark_keep(c);
    std::function<void(int)> kill = [&](int id) {
      tree.nodes[id].alive = false;
      for (int c : tree.nodes[id].children) kill(c);
    };
    for (int c : tree.nodes[v1].children) kill(c);
    for (int id : keep) tree.nodes[id].alive = true;

    TreeNode moved = std::move(low);
    TreeNode& top = tree.nodes[v1];
    top.entry = std::move(entry);
    top.entry_width = homotopy_width(s, *top.entry);
    top.effective = std::move(target);
    top.spliced_from = v2;
    top.kind = moved.kind;
    top.lead = std::move(moved.lead);
    top.lead_width = moved.lead_width;
    top.split = std::move(moved.split);
    top.children = std::move(moved.children);
    for (int c : top.children) tree.nodes[c].parent = v1;
    tree.nodes[v2].alive = false;
    tree.nodes[v2].children.clear();
    ++tree.splices;
  }
  return tree;
}

WidthBound total_width_bound(int N, int X, double D, double Y, double W) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big base = Big(N) * N + 1;
  const Big value = pow(base, X) * (Big(7) * D + Big(2) * Y + W);
  WidthBound b;
  b.log10 = X * std::log10(double(N) * N + 1) + std::log10(7 * D + 2 * Y + W);
  b.value = b.log10 < 300 ? value.convert_to<double>() : std::numeric_limits<double>::infinity();
  if (b.log10 < 15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", b.value);
    b.decimal = buf;
  } else {
    b.decimal = value.str(17, std::ios_base::scientific);
  }
  return b;
}

WidthBound total_width_bound(const GoodCoverCertificate& cert, int X, double measured_W, double D) {
  return total_width_bound(cert.N, X, D, 2 * g_sigma(cert), measured_W);
}

ContractResult contract_with_certificate(const MetricSurface& s, const PolyLoop& loop,
                                         const GoodCoverCertificate& cert, const NerveGraph& nerve,
                                         const ContractConfig& cfg) {
  if (!s.diameter()) throw Error(ErrorCode::ConfigError, "contraction needs a diameter estimate");
  const double D = *s.diameter();
  const double L = loop_length(s, loop);
  if (L > 3 * D + s.point_tolerance())
    throw Error(ErrorCode::ContractViolation, "loop length " + std::to_string(L) + " exceeds 3 D");
  if (cfg.X < 1) throw Error(ErrorCode::ConfigError, "X must be at least 1");

  if (cfg.check_hypothesis) {
    GeodesicSearch local;
    const GeodesicSearch* search = cfg.hypothesis;
    if (!search) {
      local = find_shortest_geodesic(s, cfg.geodesic_budget, cfg.seed, cfg.bpfl);
      search = &local;
    }
    if (search->candidate && search->length <= 3 * D)
      throw HypothesisViolation(*search->candidate, search->length,
                                "closed geodesic of length " + std::to_string(search->length) + " <= 3 D = " +
                                    std::to_string(3 * D));
  }

  ContractResult out;
  out.Y = 2 * g_sigma(cert);
  out.N0 = loop_class_bound(nerve, cfg.X, cert.N, cfg.enumerate_cap);
  TreeConfig tc{cfg.X, cfg.bpfl, cfg.block_width};

  std::vector<PolyLoop> roots;
  if (itinerary(s, loop, cert).alpha.m() > cfg.X) {
    out.pre_break = break_loop(s, loop, cfg.X, cert, nerve);
    roots = out.pre_break->pieces;
  } else {
    roots = {loop};
  }
  double widest = 0;
  out.W = out.pre_break ? out.pre_break->measured_W : 0.0;
  for (const auto& r : roots) {
    ContractionTree t = reduce_height(s, build_tree(s, r, cert, nerve, tc), cert, nerve, out.N0);
    TreeCheck check = check_tree(s, t, out.Y);
    if (!check.ok()) throw Error(ErrorCode::TreeInvariantViolation, check.problems.front());
    out.W = std::max(out.W, t.max_break_W());
    out.trees.push_back(std::move(t));
  }
  for (const auto& t : out.trees) {
    out.contractions.push_back(marked_contraction(s, t, D, out.W, out.Y));
    widest = std::max(widest, out.contractions.back().width);
  }
  // Pieces of a pre-break are joined at their common point, which at most
  // doubles the widest piece contraction.
  out.measured_width = out.pre_break ? out.pre_break->measured_W + 2 * widest : widest;
  out.bound = total_width_bound(cert, cfg.X, out.W, D);
  if (!(out.measured_width <= out.bound.value))
    throw Error(ErrorCode::WidthBoundViolated, "measured width " + std::to_string(out.measured_width) +
                                                   " exceeds B = " + out.bound.decimal);
  return out;
}

}  // namespace geocontract
