#pragma once

// JSON forms of the library's records. Every top-level document carries
// "schema": "geomlab/1".

#include <string>

#include <json.hpp>

#include "geomlab/count.hpp"
#include "geomlab/discretize.hpp"
#include "geomlab/embed.hpp"
#include "geomlab/obstruct.hpp"

namespace geomlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "geomlab/1";

Json tuple_to_json(const PointTuple& x, const std::string& space_label);
/// Accepts {"dim":..,"points":[[...],...]} (as written by tuple_to_json).
PointTuple tuple_from_json(const Json& j);

Json net_to_json(const Net& net);
Json attempt_to_json(const EmbeddingAttempt& a);
Json landmark_to_json(const LandmarkEmbedding& e);
Json report_to_json(const ObstructionReport& r);
Json params_to_json(const Params& p);
/// L is written as its complement ("short" ordered pairs), which is far
/// smaller than L itself for spread-out tuples.
Json long_distances_to_json(const LongDistanceSet& L);
LongDistanceSet long_distances_from_json(const Json& j);
Json record_to_json(const DiscretizationRecord& rec);
Json audit_to_json(const DiscretizationAudit& a);
Json count_to_json(const CountResult& c);
Json rational_to_json(const Rational& q);

/// Deterministic rendering: two-space indentation, trailing newline.
std::string dump(const Json& j);

}  // namespace geomlab
