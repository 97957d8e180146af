#pragma once

// Simple labeled graphs: random regular / G(n,m) generation, BFS metrics and
// adjacency spectra.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geomlab/random.hpp"

namespace geomlab {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph on vertices 0..n-1. Immutable after construction;
/// edges are stored with u < v in lexicographic order, neighbor lists sorted.
class Graph {
 public:
  Graph() = default;
  /// Edgeless graph on n vertices.
  explicit Graph(std::size_t n);
  /// Validates simplicity: throws PreconditionError on loops, repeated edges
  /// or out-of-range endpoints. Endpoint order within an edge is irrelevant.
  Graph(std::size_t n, std::vector<Edge> edges);

  [[nodiscard]] std::size_t order() const { return adjacency_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  [[nodiscard]] std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  [[nodiscard]] bool has_edge(Vertex u, Vertex v) const;
  /// The common degree if the graph is regular (n >= 1), otherwise nullopt.
  [[nodiscard]] std::optional<std::size_t> regular_degree() const;

  bool operator==(const Graph& other) const { return edges_ == other.edges_ && order() == other.order(); }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
};

// Named graphs used throughout the tests and examples.
Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph petersen_graph();

/// Uniform random simple Delta-regular graph via the pairing (configuration)
/// model, resampling the whole pairing whenever it produces a loop or a
/// multi-edge. `attempts`, when given, receives the number of pairings drawn.
Graph random_regular_graph(std::size_t n, std::size_t degree, RandomStream& rng,
                           std::size_t max_retries = 100000, std::size_t* attempts = nullptr);

/// Uniform simple graph with exactly m edges (uniform m-subset of all pairs).
Graph random_gnm_graph(std::size_t n, std::size_t m, RandomStream& rng);

inline constexpr int kUnreachable = -1;

/// Hop distances from `source`; kUnreachable for other components.
std::vector<int> bfs_distances(const Graph& g, Vertex source);
bool is_connected(const Graph& g);
/// Largest BFS distance over all pairs; nullopt when disconnected.
std::optional<int> diameter(const Graph& g);

struct SpectralOptions {
  /// Dense symmetric eigensolve up to this order, deflated power iteration above.
  std::size_t dense_limit = 4096;
  double tolerance = 1e-9;
  std::size_t max_iterations = 2000000;
};

struct SpectralSummary {
  double lambda2 = 0.0;
  /// 1 - lambda2 / Delta.
  double gap = 0.0;
  std::size_t degree = 0;
  bool dense = true;
  bool converged = true;
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Second-largest adjacency eigenvalue of a regular graph.
/// Throws PreconditionError for irregular graphs or n < 2.
SpectralSummary second_eigenvalue(const Graph& g, const SpectralOptions& options = {});

/// All adjacency eigenvalues in ascending order (dense solve).
std::vector<double> adjacency_spectrum(const Graph& g);

/// "n m" header then one "u v" line per edge, u < v, lexicographic order.
std::string to_edge_list(const Graph& g);
Graph parse_edge_list(std::string_view text);

}  // namespace geomlab
