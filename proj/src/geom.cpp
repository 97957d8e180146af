#include "geomlab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "geomlab/error.hpp"
#include "geomlab/parallel.hpp"

namespace geomlab {

namespace {

NearestIndex index_tuple(const NormedSpace& space, const PointTuple& x, double radius) {
  NearestIndex index(space, radius * space.box_factor());
  for (std::size_t i = 0; i < x.size(); ++i) index.insert(x[i]);
  return index;
}

void require_dim(const NormedSpace& space, const PointTuple& x, const char* what) {
  if (!x.empty() && x.dim() != space.dim())
    throw PreconditionError(std::string(what) + ": tuple dimension " + std::to_string(x.dim()) +
                            " does not match space dimension " + std::to_string(space.dim()));
}

}  // namespace

Graph geometric_graph(const NormedSpace& space, const PointTuple& x, double threshold) {
  require_dim(space, x, "geometric_graph");
  const std::size_t n = x.size();
  std::vector<std::vector<Edge>> rows(n);
  std::vector<std::size_t> coincident(n, n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = space.distance(x[i], x[j]);
      if (dist == 0.0) {
        coincident[i] = j;
        return;
      }
      if (dist <= threshold)
        rows[i].push_back({static_cast<Vertex>(i), static_cast<Vertex>(j)});
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    if (coincident[i] != n)
      throw PreconditionError("geometric_graph: points " + std::to_string(i) + " and " +
                              std::to_string(coincident[i]) + " coincide");
  std::vector<Edge> edges;
  for (auto& r : rows) edges.insert(edges.end(), r.begin(), r.end());
  return Graph(n, std::move(edges));
}

std::vector<NearPair> near_threshold_pairs(const NormedSpace& space, const PointTuple& x,
                                           double threshold, double window) {
  require_dim(space, x, "near_threshold_pairs");
  std::vector<NearPair> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dist = space.distance(x[i], x[j]);
      if (std::abs(dist - threshold) <= window) out.push_back({i, j, dist});
    }
  return out;
}

SparsityCheck check_sparsity(const NormedSpace& space, const PointTuple& x, std::size_t delta,
                             double radius) {
  require_dim(space, x, "check_sparsity");
  SparsityCheck out;
  if (x.empty()) return out;
  const auto index = index_tuple(space, x, radius);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<std::size_t> crowd;
    index.for_each_within(x[i], radius, [&](std::size_t j, double) {
      if (j != i) crowd.push_back(j);
    });
    if (crowd.size() > delta) {
      std::sort(crowd.begin(), crowd.end());
      out.sparse = false;
      out.witness = i;
      out.crowd = std::move(crowd);
      return out;
    }
  }
  return out;
}

std::string to_string(DomainReason r) {
  switch (r) {
    case DomainReason::ok:
      return "ok";
    case DomainReason::diameter:
      return "diameter";
    case DomainReason::sparsity:
      return "sparsity";
  }
  return "unknown";
}

DomainCheck check_domain(const NormedSpace& space, const PointTuple& x, std::size_t delta,
                         double diam_const) {
  require_dim(space, x, "check_domain");
  DomainCheck out;
  const std::size_t n = x.size();
  out.radius = n == 0 ? 0.0 : diam_const * std::log(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double nv = space.norm(x[i]);
    if (nv > out.radius) {
      out.reason = DomainReason::diameter;
      out.index = i;
      out.norm = nv;
      return out;
    }
  }
  auto sparsity = check_sparsity(space, x, delta, 0.5);
  if (!sparsity.sparse) {
    out.reason = DomainReason::sparsity;
    out.index = sparsity.witness;
    out.crowd = std::move(sparsity.crowd);
  }
  return out;
}

IsomorphismCheck check_geometric_isomorphism(const NormedSpace& space, const PointTuple& x,
                                             const Graph& g) {
  require_dim(space, x, "check_geometric_isomorphism");
  if (x.size() != g.order())
    throw PreconditionError("check_geometric_isomorphism: tuple has " + std::to_string(x.size()) +
                            " points, graph has " + std::to_string(g.order()) + " vertices");
  IsomorphismCheck out;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dist = space.distance(x[i], x[j]);
      const bool edge = g.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
      if (edge != (dist <= 1.0)) {
        out.isomorphic = false;
        out.violation = std::pair{i, j};
        out.violation_is_edge = edge;
        out.violation_distance = dist;
        return out;
      }
    }
  return out;
}

PointTuple translate_to_origin(const PointTuple& x) {
  if (x.empty()) return x;
  const Vector origin(x[0].begin(), x[0].end());
  PointTuple out = x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto p = out.mutable_point(i);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] -= origin[k];
  }
  return out;
}

PointTuple permute(const PointTuple& x, const std::vector<std::size_t>& perm) {
  if (perm.size() != x.size()) throw PreconditionError("permute: size mismatch");
  PointTuple out(x.dim());
  out.reserve(x.size());
  for (std::size_t k : perm) out.push_back(x[k]);
  return out;
}

PointTuple random_sparse_tuple(const NormedSpace& space, std::size_t n, std::size_t delta,
                               double radius, RandomStream& rng, std::size_t max_attempts) {
  NearestIndex index(space, 0.5 * space.box_factor());
  std::vector<std::size_t> crowding;
  crowding.reserve(n);
  const Vector origin(space.dim(), 0.0);
  std::vector<std::size_t> near;
  for (std::size_t attempt = 0; index.size() < n; ++attempt) {
    if (attempt >= max_attempts)
      throw BudgetExhausted("random_sparse_tuple: placed " + std::to_string(index.size()) +
                            " of " + std::to_string(n) + " points after " +
                            std::to_string(max_attempts) + " candidates");
    const Vector c = sample_ball(space, origin, radius, rng);
    near.clear();
    bool ok = true;
    index.for_each_within(c, 0.5, [&](std::size_t j, double) {
      near.push_back(j);
      if (crowding[j] >= delta) ok = false;
    });
    if (!ok || near.size() > delta) continue;
    for (std::size_t j : near) ++crowding[j];
    crowding.push_back(near.size());
    index.insert(c);
  }
  return index.points();
}

void write_pair_distances_csv(const NormedSpace& space, const PointTuple& x, std::ostream& out) {
  require_dim(space, x, "write_pair_distances_csv");
  out << "i,j,distance\n" << std::setprecision(17);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      out << i << ',' << j << ',' << space.distance(x[i], x[j]) << '\n';
}

}  // namespace geomlab
