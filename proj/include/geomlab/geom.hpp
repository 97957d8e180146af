#pragma once

// Geometric (unit-distance) graphs of point tuples, sparsity and domain
// predicates, and labeled isomorphism checks.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "geomlab/graphs.hpp"
#include "geomlab/norms.hpp"

namespace geomlab {

/// x = (x_1, ..., x_n): the embedding candidate, one point per vertex.
using PointTuple = PointSet;

/// Edge {i,j} iff distance(x_i, x_j) <= threshold (closed condition, no
/// tolerance). Throws PreconditionError naming the first coincident pair.
Graph geometric_graph(const NormedSpace& space, const PointTuple& x, double threshold = 1.0);

struct NearPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double distance = 0.0;
};

/// Diagnostics: pairs whose distance lies within `window` of the threshold.
std::vector<NearPair> near_threshold_pairs(const NormedSpace& space, const PointTuple& x,
                                           double threshold = 1.0, double window = 1e-6);

struct SparsityCheck {
  bool sparse = true;
  /// On failure: the violating index and every other index within the radius.
  std::optional<std::size_t> witness;
  std::vector<std::size_t> crowd;
};

/// (radius, Delta)-sparsity: every point has at most Delta others within radius.
SparsityCheck check_sparsity(const NormedSpace& space, const PointTuple& x, std::size_t delta,
                             double radius = 0.5);

enum class DomainReason { ok, diameter, sparsity };
std::string to_string(DomainReason r);

struct DomainCheck {
  DomainReason reason = DomainReason::ok;
  /// Diameter failure: offending index and its norm. Sparsity: the witness.
  std::optional<std::size_t> index;
  double norm = 0.0;
  double radius = 0.0;
  std::vector<std::size_t> crowd;
  [[nodiscard]] bool ok() const { return reason == DomainReason::ok; }
};

/// Membership in the domain: every ||x_i|| <= D log n (natural log) and the
/// tuple is (1/2, Delta)-sparse.
DomainCheck check_domain(const NormedSpace& space, const PointTuple& x, std::size_t delta,
                         double diam_const);

struct IsomorphismCheck {
  bool isomorphic = true;
  std::optional<std::pair<std::size_t, std::size_t>> violation;
  bool violation_is_edge = false;
  double violation_distance = 0.0;
};

/// Whether i -> x_i is an isomorphism between G and geom(x). Reports the
/// first violating pair in (i, j) lexicographic order.
IsomorphismCheck check_geometric_isomorphism(const NormedSpace& space, const PointTuple& x,
                                             const Graph& g);

/// Translates the tuple so that x_1 = 0.
PointTuple translate_to_origin(const PointTuple& x);

/// Relabels the tuple: out[k] = x[perm[k]].
PointTuple permute(const PointTuple& x, const std::vector<std::size_t>& perm);

/// Random tuple inside B(0, radius) that is (1/2, Delta)-sparse, built by
/// rejection: uniform candidates are kept only if no point (old or new) ends
/// up with more than Delta others within 1/2.
PointTuple random_sparse_tuple(const NormedSpace& space, std::size_t n, std::size_t delta,
                               double radius, RandomStream& rng,
                               std::size_t max_attempts = 50000000);

/// Streams "i,j,distance" rows for all i < j, with a header line.
void write_pair_distances_csv(const NormedSpace& space, const PointTuple& x, std::ostream& out);

}  // namespace geomlab
