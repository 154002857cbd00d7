#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geocontract/approximation.hpp"
#include "geocontract/birkhoff.hpp"
#include "geocontract/errors.hpp"

namespace geocontract {

/// Raised when curve shortening stalls at a closed geodesic short enough to
/// break the no-short-geodesic hypothesis. Carries the geodesic.
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(PolyLoop geodesic, double length, const std::string& what)
      : Error(ErrorCode::HypothesisViolated, what), geodesic_(std::move(geodesic)), length_(length) {}
  const PolyLoop& geodesic() const { return geodesic_; }
  double length() const { return length_; }

 private:
  PolyLoop geodesic_;
  double length_;
};

enum class StepKind { Leaf, Single, Split };

struct TreeNode {
  int id = 0;
  int parent = -1;
  bool alive = true;
  PolyLoop loop;
  SimplicialLoop alpha, canonical;
  int generation = 0;  // breaks between the root and this node

  // Set by a splice: loop -> effective, a same-approximation homotopy.
  std::optional<DiscreteHomotopy> entry;
  PolyLoop effective;
  int spliced_from = -1;

  StepKind kind = StepKind::Leaf;
  DiscreteHomotopy lead;  // effective -> child (Single) or -> loop to break (Split)
  std::optional<BreakResult> split;
  std::vector<int> children;

  double entry_width = 0, lead_width = 0;
  /// Width of the homotopy carried by the edge(s) to the children.
  double step_width() const { return entry_width + lead_width + (split ? split->measured_W : 0.0); }
};

struct ContractionTree {
  std::vector<TreeNode> nodes;  // index = id; spliced-out nodes stay with alive = false
  int root = 0;
  int X = 0;
  double D = 0;
  double block_width = 0;
  double root_length = 0;
  int splices = 0;

  int alive_count() const;
  /// Root-to-leaf node sequences.
  std::vector<std::vector<int>> paths() const;
  int height() const;  // edges along the deepest path
  /// Single- and multi-child step counts along the deepest path.
  std::pair<int, int> deepest_counts() const;
  /// Largest single- and multi-child counts over all paths.
  std::pair<int, int> max_counts() const;
  /// Most nodes carrying a splice entry on one path.
  int max_entries() const;
  double max_break_W() const;
  double min_break_delta() const;
};

struct TreeCheck {
  bool leaves_are_points = true;
  bool m_within_X = true;
  bool single_widths = true;
  bool multi_widths = true;
  bool ids_ordered = true;
  bool break_depth = true;
  bool links = true;  // children start where their parent's step ends
  std::vector<std::string> problems;

  bool ok() const {
    return leaves_are_points && m_within_X && single_widths && multi_widths && ids_ordered && break_depth && links;
  }
};

/// Re-verifies the tree invariants. `Y` widens the width limits of nodes
/// that carry a splice entry (0 for unreduced trees).
TreeCheck check_tree(const MetricSurface& s, const ContractionTree& tree, double Y = 0);

struct TreeConfig {
  int X = 0;
  BpflConfig bpfl;
  double block_width = 0;  // 0 means D
};

/// Chains curve-shortening blocks while approximations stay within X and
/// breaks the loop at the first block that exceeds it, then recurses on
/// the pieces. Throws HypothesisViolated when shortening stalls, and
/// propagates CannotShorten and IterationCapExceeded.
ContractionTree build_tree(const MetricSurface& s, const PolyLoop& loop, const GoodCoverCertificate& cert,
                           const NerveGraph& nerve, const TreeConfig& cfg);

struct MarkedStage {
  int node = 0;
  StepKind kind = StepKind::Single;
  double homotopy_width = 0;  // entry + lead (+ rotation + split)
  double sigma_length = 0;    // marked point trajectory during the stage
  double width = 0;           // max(2 sigma, homotopy_width)
};

struct MarkedContraction {
  std::vector<MarkedStage> stages;
  std::vector<SurfacePath> marked_trajectories;  // per node id; empty for dead nodes
  std::vector<int> marked_index;                 // sample carrying the marked point on entry
  double whisker_retraction = 0;  // longest whisker path contracted at the end
  double width = 0;               // max over root-leaf paths of stage widths plus retraction
  int h1_used = 0, h2_used = 0;
  int entries_used = 0;           // most splice entries on one path
  double bound = 0;               // 2 D h1 + (5 D + 2 W) h2 + 2 Y entries
};

/// Rides the marked point through every stage, rotating it to the break
/// point before each split. Widths compose along root-to-leaf paths.
/// Throws TreeInvariantViolation on a malformed tree.
MarkedContraction marked_contraction(const MetricSurface& s, const ContractionTree& tree, double D,
                                     double measured_W, double Y = 0);

/// Canonical loops with m <= X: the exhaustive count when enumerable,
/// otherwise (N^2+1)^X saturated to the double range.
double loop_class_bound(const NerveGraph& nerve, int X, int N, std::uint64_t cap = 10'000'000);

/// Splices the subtree of a deeper node with the same canonical
/// approximation in place of the shallowest ancestor match on a deepest
/// path until the height is at most N0. Throws NoDuplicateFound.
ContractionTree reduce_height(const MetricSurface& s, ContractionTree tree, const GoodCoverCertificate& cert,
                              const NerveGraph& nerve, double N0);

/// (N^2+1)^X (7 D + 2 Y + W) with Y = 2 G_sigma, as a decimal string and
/// as a double (inf when out of range).
struct WidthBound {
  std::string decimal;
  double value = 0;
  double log10 = 0;
};
WidthBound total_width_bound(int N, int X, double D, double Y, double W);
WidthBound total_width_bound(const GoodCoverCertificate& cert, int X, double measured_W, double D);

struct ContractConfig {
  int X = 0;
  BpflConfig bpfl;
  double block_width = 0;
  int geodesic_budget = 32;
  std::uint64_t seed = 0;
  bool check_hypothesis = true;
  const GeodesicSearch* hypothesis = nullptr;  // reuse an earlier search instead of running one
  std::uint64_t enumerate_cap = 10'000'000;
};

struct ContractResult {
  std::vector<ContractionTree> trees;        // one, or one per pre-break piece
  std::vector<MarkedContraction> contractions;
  std::optional<BreakResult> pre_break;
  double measured_width = 0;
  WidthBound bound;
  double N0 = 0;
  double Y = 0;
  double W = 0;
};

/// Full pipeline: hypothesis check, optional pre-break, tree, height
/// reduction and marked contraction. Throws HypothesisViolated and
/// WidthBoundViolated.
ContractResult contract_with_certificate(const MetricSurface& s, const PolyLoop& loop,
                                         const GoodCoverCertificate& cert, const NerveGraph& nerve,
                                         const ContractConfig& cfg);

}  // namespace geocontract
