#pragma once

#include <optional>
#include <string>

#include "geocontract/contraction.hpp"

namespace geocontract {

/// max(2 L, 2 W + 2 D): depth of loops of length <= L in a space whose
/// loops of length <= L contract with width <= W.
double depth_bound(double L, double W, double D);

/// Largest frame length above length(loop), clamped at 0.
double measure_depth(const MetricSurface& s, const PolyLoop& loop, const DiscreteHomotopy& h);
/// Same for a marked contraction: every stage frame plus the pending
/// pieces of enclosing splits and the whiskers laid so far.
double measure_depth(const MetricSurface& s, const ContractionTree& tree, const MarkedContraction& mc);

/// ((4k+2) m + (2k-3)) D + (2m-1) S.
double nabutovsky_rotman_length(int k, int m, double D, double S);

struct MainBound {
  double literal = 0;   // 10 n + D + (2n-1) S_p
  double k2 = 0;        // (10 n + 1) D + (2n-1) S_p
  double A_final = 0;   // larger of the two
};
MainBound main_bound(int n, double D, double S_p);

/// Every quantity of a run, measured or derived. Derived fields follow
/// from the others through the functions above.
struct BoundsReport {
  int n = 2;
  double D_hat = 0;
  double area = 0;
  int N = 0;
  double F_A = 0, F_B = 0, F = 0, G = 0;
  double G_sigma = 0, Y = 0;
  int X = 0;
  int Z_hat = 0;
  double measured_W = 0;
  std::optional<double> measured_delta;  // absent when no loop was broken
  double N0 = 0;
  std::string B;  // decimal; can exceed the double range
  double B_log10 = 0;
  std::string S_p_bound;                 // depth_bound(3 D, B, D), decimal
  std::optional<double> S_p_measured;    // depth_bound(3 D, measured total width, D)
  double S_p = 0;                        // value fed to the length formulas
  std::string S_p_source = "bound";      // "measured", "bound" or "override"
  int k = 2;
  int m = 2;          // always n
  double L_thm4 = 0;  // ((4k+2)m + (2k-3)) D + (2m-1) S_p
  double F_main = 0;  // 10 m + D + (2m-1) S_p
  double A_final = 0;
  std::string A_theory;  // A_final at S_p = S_p_bound, decimal
  std::optional<double> shortest_geodesic_found;
  std::optional<double> measured_total_width;
  std::optional<double> measured_depth;
  bool within_preset_constants = false;  // F <= 3 D and G <= 21 D
  std::string B_preset;                  // B with F_A = 3 D, G = 21 D
};

struct Provenance {
  std::string mesh;
  std::string mesh_hash;  // 16 hex digits
  std::uint64_t seed = 0;
  std::string config_json = "{}";  // canonical JSON of the run configuration
};

/// Fills the derived fields of `r` from its inputs. S_p is taken from
/// `S_p_override` when given, else from S_p_measured when present, else
/// from S_p_bound.
void derive_bounds(BoundsReport& r, std::optional<double> S_p_override = std::nullopt);

/// Stable JSON: fixed key order, two-space indent, trailing newline.
std::string emit_report(const BoundsReport& r, const Provenance& p);
/// Inverse of emit_report. Throws SerializationError.
std::pair<BoundsReport, Provenance> parse_report(const std::string& json);

}  // namespace geocontract
