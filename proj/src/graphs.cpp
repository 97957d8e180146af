#include "geomlab/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <Eigen/Dense>

#include "geomlab/error.hpp"
#include "geomlab/parallel.hpp"

namespace geomlab {

Graph::Graph(std::size_t n) : adjacency_(n) {}

Graph::Graph(std::size_t n, std::vector<Edge> edges) : adjacency_(n) {
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n)
      throw PreconditionError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              "} out of range for n=" + std::to_string(n));
    if (e.u == e.v) throw PreconditionError("self-loop at vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
    throw PreconditionError("repeated edge {" + std::to_string(dup->u) + "," +
                            std::to_string(dup->v) + "}");
  for (const auto& e : edges) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
  edges_ = std::move(edges);
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u >= order() || v >= order()) return false;
  const auto& nb = adjacency_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<std::size_t> Graph::regular_degree() const {
  if (adjacency_.empty()) return std::nullopt;
  const std::size_t d = adjacency_.front().size();
  for (const auto& nb : adjacency_)
    if (nb.size() != d) return std::nullopt;
  return d;
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw PreconditionError("cycle_graph needs n >= 3");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) edges.push_back({u, static_cast<Vertex>((u + 1) % n)});
  return Graph(n, std::move(edges));
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  return Graph(n, std::move(edges));
}

Graph petersen_graph() {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 5; ++i) {
    edges.push_back({i, static_cast<Vertex>((i + 1) % 5)});               // outer cycle
    edges.push_back({i, i + 5});                                          // spokes
    edges.push_back({i + 5, static_cast<Vertex>(5 + (i + 2) % 5)});       // inner pentagram
  }
  return Graph(10, std::move(edges));
}

Graph random_regular_graph(std::size_t n, std::size_t degree, RandomStream& rng,
                           std::size_t max_retries, std::size_t* attempts) {
  if ((n * degree) % 2 != 0)
    throw PreconditionError("random_regular_graph: n*Delta = " + std::to_string(n * degree) +
                            " is odd");
  if (degree >= n && !(degree == 0 && n == 0))
    throw PreconditionError("random_regular_graph: need Delta < n");
  if (degree == 0) {
    if (attempts) *attempts = 1;
    return Graph(n);
  }

  std::vector<Vertex> stubs(n * degree);
  for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<Vertex>(i / degree);
  std::vector<Edge> edges(stubs.size() / 2);

  for (std::size_t attempt = 1; attempt <= max_retries; ++attempt) {
    for (std::size_t i = stubs.size() - 1; i > 0; --i) std::swap(stubs[i], stubs[rng.below(i + 1)]);
    bool simple = true;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      Vertex a = stubs[2 * k];
      Vertex b = stubs[2 * k + 1];
      if (a == b) {
        simple = false;
        break;
      }
      if (a > b) std::swap(a, b);
      edges[k] = {a, b};
    }
    if (simple) {
      auto sorted = edges;
      std::sort(sorted.begin(), sorted.end());
      simple = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
      if (simple) {
        if (attempts) *attempts = attempt;
        return Graph(n, std::move(sorted));
      }
    }
  }
  throw BudgetExhausted("random_regular_graph: no simple pairing after " +
                        std::to_string(max_retries) + " attempts");
}

Graph random_gnm_graph(std::size_t n, std::size_t m, RandomStream& rng) {
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - (n > 0 ? 1 : 0)) / 2;
  if (m > total)
    throw PreconditionError("random_gnm_graph: m=" + std::to_string(m) + " exceeds " +
                            std::to_string(total) + " pairs");
  // Floyd's subset sampling over pair ranks.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(m * 2);
  for (std::uint64_t j = total - m; j < total; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> ranks(chosen.begin(), chosen.end());
  std::sort(ranks.begin(), ranks.end());

  std::vector<Edge> edges;
  edges.reserve(m);
  // Rank r enumerates pairs (u, v), u < v, row by row.
  Vertex u = 0;
  std::uint64_t row_start = 0;
  for (auto r : ranks) {
    while (r >= row_start + (n - 1 - u)) {
      row_start += n - 1 - u;
      ++u;
    }
    edges.push_back({u, static_cast<Vertex>(u + 1 + (r - row_start))});
  }
  return Graph(n, std::move(edges));
}

std::vector<int> bfs_distances(const Graph& g, Vertex source) {
  if (source >= g.order()) throw PreconditionError("bfs_distances: source out of range");
  std::vector<int> dist(g.order(), kUnreachable);
  std::vector<Vertex> queue;
  queue.reserve(g.order());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (Vertex w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

bool is_connected(const Graph& g) {
  if (g.order() == 0) return true;
  const auto d = bfs_distances(g, 0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x == kUnreachable; });
}

std::optional<int> diameter(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<int> ecc(n, 0);
  parallel_for(n, [&](std::size_t v) {
    const auto d = bfs_distances(g, static_cast<Vertex>(v));
    int e = 0;
    for (int x : d) {
      if (x == kUnreachable) {
        e = kUnreachable;
        break;
      }
      e = std::max(e, x);
    }
    ecc[v] = e;
  });
  int best = 0;
  for (int e : ecc) {
    if (e == kUnreachable) return std::nullopt;
    best = std::max(best, e);
  }
  return best;
}

namespace {

Eigen::MatrixXd dense_adjacency(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

void multiply(const Graph& g, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t v = 0; v < g.order(); ++v) {
    double s = 0.0;
    for (Vertex w : g.neighbors(static_cast<Vertex>(v))) s += x[w];
    y[v] = s;
  }
}

void deflate_ones(std::vector<double>& x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  for (auto& v : x) v -= mean;
}

double normalize(std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  const double nrm = std::sqrt(s);
  if (nrm > 0.0)
    for (auto& v : x) v /= nrm;
  return nrm;
}

}  // namespace

std::vector<double> adjacency_spectrum(const Graph& g) {
  if (g.order() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_adjacency(g), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

SpectralSummary second_eigenvalue(const Graph& g, const SpectralOptions& options) {
  const auto degree = g.regular_degree();
  if (!degree) throw PreconditionError("second_eigenvalue: graph is not regular");
  if (g.order() < 2) throw PreconditionError("second_eigenvalue: need at least two vertices");
  const auto delta = static_cast<double>(*degree);

  SpectralSummary out;
  out.degree = *degree;
  if (g.order() <= options.dense_limit) {
    const auto spectrum = adjacency_spectrum(g);
    out.lambda2 = spectrum[spectrum.size() - 2];
  } else {
    // Power iteration on A + Delta*I (positive semidefinite for a Delta-regular
    // graph) restricted to the complement of the all-ones eigenvector.
    out.dense = false;
    out.converged = false;
    const std::size_t n = g.order();
    RandomStream rng(0x5eed);
    std::vector<double> x(n), ax(n);
    for (auto& v : x) v = rng.normal();
    deflate_ones(x);
    normalize(x);
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
      multiply(g, x, ax);
      double rayleigh = 0.0;
      for (std::size_t i = 0; i < n; ++i) rayleigh += x[i] * ax[i];
      double res = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = ax[i] - rayleigh * x[i];
        res += r * r;
      }
      out.lambda2 = rayleigh;
      out.residual = std::sqrt(res);
      out.iterations = it;
      if (out.residual <= options.tolerance) {
        out.converged = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) x[i] = ax[i] + delta * x[i];
      deflate_ones(x);
      normalize(x);
    }
  }
  out.gap = 1.0 - out.lambda2 / delta;
  return out;
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream os;
  os << g.order() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
  return os.str();
}

Graph parse_edge_list(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::size_t n = 0;
  std::size_t m = 0;
  if (!(is >> n >> m)) throw PreconditionError("edge list: missing 'n m' header");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    if (!(is >> u >> v))
      throw PreconditionError("edge list: expected " + std::to_string(m) + " edges, got " +
                              std::to_string(k));
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  return Graph(n, std::move(edges));
}

}  // namespace geomlab
