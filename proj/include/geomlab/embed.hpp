#pragma once

// Embedding constructions: the l_inf landmark map and a hinge-loss local
// search for unit-distance realizations.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "geomlab/geom.hpp"

namespace geomlab {

/// x_i = (dist_G(i, landmark_k))_k, kept as exact integers.
struct LandmarkEmbedding {
  std::size_t dim = 0;
  std::vector<Vertex> landmarks;
  /// Row-major n x dim matrix of hop distances.
  std::vector<std::int32_t> coords;

  [[nodiscard]] std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  /// Exact integer l_inf distance between rows i and j.
  [[nodiscard]] std::int32_t linf_distance(std::size_t i, std::size_t j) const;
  [[nodiscard]] PointTuple tuple() const;
};

/// Draws `dim` landmarks uniformly and independently (with replacement) and
/// maps every vertex to its BFS distances to them. Every edge lands at l_inf
/// distance <= 1. Throws PreconditionError on a disconnected graph or dim == 0.
LandmarkEmbedding landmark_embedding(const Graph& g, std::size_t dim, RandomStream& rng);

struct PairViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  bool is_edge = false;
  double distance = 0.0;
};

struct EmbeddingAttempt {
  PointTuple tuple;
  std::string space_label;
  bool success = false;
  std::size_t edge_violations = 0;
  std::size_t nonedge_violations = 0;
  /// First violations in (i, j) order, capped at kViolationCap entries.
  std::vector<PairViolation> violations;
  std::vector<double> objective_trace;
  std::uint64_t stream_key = 0;
  std::size_t restart = 0;

  static constexpr std::size_t kViolationCap = 100;
};

struct StressSchedule {
  std::size_t restarts = 8;
  /// Non-edges are pushed to distance >= 1 + margin during the search only.
  double margin = 0.05;
  double initial_step = 0.05;
  /// Side of the random initial box is init_scale * n^(1/d).
  double init_scale = 1.0;
  /// Objective is recorded every `trace_every` iterations.
  std::size_t trace_every = 50;
};

/// sum_{edges} max(0, d - 1)^2 + sum_{non-edges} max(0, 1 + margin - d)^2.
double hinge_objective(const NormedSpace& space, const PointTuple& x, const Graph& g,
                       double margin);

/// Recomputes every violation from scratch at threshold 1 (no margin). The
/// authoritative validity judgment for a candidate tuple.
EmbeddingAttempt embedding_report(const NormedSpace& space, const PointTuple& x, const Graph& g);

/// Gradient descent with adaptive step on the hinge objective, from
/// `schedule.restarts` random starts on independent substreams. Returns the
/// best attempt (successful first, then fewest violations, then objective),
/// judged by embedding_report. Failure is a valid outcome.
EmbeddingAttempt stress_embed(const Graph& g, const NormedSpace& space, std::size_t iters,
                              RandomStream& rng, const StressSchedule& schedule = {});

}  // namespace geomlab
