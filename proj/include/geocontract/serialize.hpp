#pragma once

#include <string>

#include "geocontract/bounds.hpp"
#include "geocontract/contraction.hpp"

namespace geocontract {

// All writers emit stable, two-space indented JSON ending in a newline.
// Readers throw SerializationError on malformed input.

std::string surface_summary_json(const MetricSurface& s, const std::string& mesh, int diameter_samples,
                                 std::uint64_t seed);

std::string loop_json(const MetricSurface& s, const PolyLoop& loop);
/// Samples only; segments are rebuilt as geodesics.
PolyLoop loop_from_json(const MetricSurface& s, const std::string& json);

std::string certificate_json(const GoodCoverCertificate& cert);
/// Rebuilds elements from their member lists and re-indexes them.
GoodCoverCertificate certificate_from_json(const MetricSurface& s, const std::string& json);

std::string nerve_json(const NerveGraph& g, int Z_hat, int X, double N0);

std::string geodesic_search_json(const MetricSurface& s, const GeodesicSearch& search, int budget,
                                 std::uint64_t seed);
/// Shortest candidate length, when the search found one.
std::optional<double> geodesic_length_from_json(const std::string& json);

std::string contraction_json(const MetricSurface& s, const ContractResult& r);

/// First 16 hex digits of the mesh content hash.
std::string hash_hex(std::uint64_t h);

}  // namespace geocontract
