#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "geocontract/errors.hpp"

namespace geocontract {

/// Everything a run directory is reproducible from, together with the mesh.
struct RunConfig {
  std::string mesh;                 // file path or fixture name
  std::optional<double> epsilon;    // geodesic accuracy, (0, 1]
  int samples = 64;                 // K, samples per loop
  std::optional<double> radius;     // cover radius; default D/3
  std::uint64_t seed = 1;
  std::optional<int> X;             // default 2 Z
  std::optional<double> rho;        // BPFL anchor spacing
  int stall_window = 20;
  double stall_tol = 1e-4;
  std::string preset;               // "" or "lemma2_10"
  int n = 2;
  int budget = 32;
  int diameter_samples = 16;
  int cover_trials = 64;
  int z_trials = 20;
  std::string loop = "plane:0.2,0.1,1,0.3";  // plane:nx,ny,nz,c | file:PATH | geodesic
  bool check_hypothesis = true;
  std::optional<double> block_width;
  std::optional<double> sp;         // S_p override for the report

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  /// Canonical JSON, every key present (null for unset optionals).
  std::string to_json() const;
  /// Applies the keys of `json` on top of `*this`. Unknown keys and wrong
  /// types raise ConfigError.
  void merge_json(const std::string& json);
};

namespace artifact {
inline constexpr const char* config = "config.json";
inline constexpr const char* surface = "surface.json";
inline constexpr const char* certificate = "certificate.json";
inline constexpr const char* nerve = "nerve.json";
inline constexpr const char* geodesic = "geodesic.json";
inline constexpr const char* contraction = "contraction.json";
inline constexpr const char* hypothesis = "hypothesis_violation.json";
inline constexpr const char* report = "report.json";
}  // namespace artifact

// Each command reads what it needs from `dir`, writes its artifacts there
// and returns a short human summary.
std::string cmd_ingest(const RunConfig& cfg, const std::filesystem::path& dir);
std::string cmd_cover(const RunConfig& cfg, const std::filesystem::path& dir);
std::string cmd_nerve(const RunConfig& cfg, const std::filesystem::path& dir);
std::string cmd_geodesic(const RunConfig& cfg, const std::filesystem::path& dir);
/// Also refreshes report.json. Writes hypothesis_violation.json before
/// rethrowing HypothesisViolated.
std::string cmd_contract(const RunConfig& cfg, const std::filesystem::path& dir);
std::string cmd_bounds(const RunConfig& cfg, const std::filesystem::path& dir);
std::string cmd_render(const RunConfig& cfg, const std::filesystem::path& dir);

/// 0 ok, 1 other, 2 config, 3 missing artifact, 4 hypothesis violated,
/// 5 not a good cover, 6 diagnostic failure, 7 bad input data.
int exit_code(ErrorCode code);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& text);

}  // namespace geocontract
