#include "geomlab/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "geomlab/error.hpp"
#include "geomlab/parallel.hpp"

namespace geomlab {

std::int32_t LandmarkEmbedding::linf_distance(std::size_t i, std::size_t j) const {
  std::int32_t best = 0;
  for (std::size_t k = 0; k < dim; ++k)
    best = std::max(best, std::abs(coords[i * dim + k] - coords[j * dim + k]));
  return best;
}

PointTuple LandmarkEmbedding::tuple() const {
  std::vector<double> c(coords.begin(), coords.end());
  return PointTuple(dim, std::move(c));
}

LandmarkEmbedding landmark_embedding(const Graph& g, std::size_t dim, RandomStream& rng) {
  if (dim == 0) throw PreconditionError("landmark_embedding: dimension must be >= 1");
  if (g.order() == 0) throw PreconditionError("landmark_embedding: empty graph");
  if (!is_connected(g)) throw PreconditionError("landmark_embedding: graph is disconnected");
  LandmarkEmbedding out;
  out.dim = dim;
  const std::size_t n = g.order();
  out.coords.assign(n * dim, 0);
  for (std::size_t k = 0; k < dim; ++k) out.landmarks.push_back(static_cast<Vertex>(rng.below(n)));
  parallel_for(dim, [&](std::size_t k) {
    const auto d = bfs_distances(g, out.landmarks[k]);
    for (std::size_t i = 0; i < n; ++i) out.coords[i * dim + k] = d[i];
  });
  return out;
}

double hinge_objective(const NormedSpace& space, const PointTuple& x, const Graph& g,
                       double margin) {
  const std::size_t n = x.size();
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = space.distance(x[i], x[j]);
      if (g.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j))) {
        const double e = std::max(0.0, d - 1.0);
        s += e * e;
      } else {
        const double e = std::max(0.0, 1.0 + margin - d);
        s += e * e;
      }
    }
    rows[i] = s;
  });
  return pairwise_sum(rows);
}

EmbeddingAttempt embedding_report(const NormedSpace& space, const PointTuple& x, const Graph& g) {
  if (x.size() != g.order())
    throw PreconditionError("embedding_report: tuple has " + std::to_string(x.size()) +
                            " points, graph has " + std::to_string(g.order()) + " vertices");
  EmbeddingAttempt out;
  out.tuple = x;
  out.space_label = space.label();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double d = space.distance(x[i], x[j]);
      const bool edge = g.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
      const bool bad = edge ? d > 1.0 : d <= 1.0;
      if (!bad) continue;
      (edge ? out.edge_violations : out.nonedge_violations) += 1;
      if (out.violations.size() < EmbeddingAttempt::kViolationCap)
        out.violations.push_back({i, j, edge, d});
    }
  out.success = out.edge_violations == 0 && out.nonedge_violations == 0;
  return out;
}

namespace {

struct Candidate {
  EmbeddingAttempt report;
  double objective = std::numeric_limits<double>::infinity();
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.report.success != b.report.success) return a.report.success;
  const auto va = a.report.edge_violations + a.report.nonedge_violations;
  const auto vb = b.report.edge_violations + b.report.nonedge_violations;
  if (va != vb) return va < vb;
  return a.objective < b.objective;
}

// Gradient of the hinge objective with respect to every coordinate.
double objective_and_gradient(const NormedSpace& space, const PointTuple& x, const Graph& g,
                              double margin, std::vector<double>& grad) {
  const std::size_t n = x.size();
  const std::size_t d = x.dim();
  std::fill(grad.begin(), grad.end(), 0.0);
  Vector diff(d), dn(d);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < d; ++k) diff[k] = x[i][k] - x[j][k];
      const double dist = space.norm(diff);
      double coef = 0.0;
      if (g.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j))) {
        const double e = std::max(0.0, dist - 1.0);
        total += e * e;
        coef = 2.0 * e;
      } else {
        const double e = std::max(0.0, 1.0 + margin - dist);
        total += e * e;
        coef = -2.0 * e;
      }
      if (coef == 0.0) continue;
      space.norm_gradient(diff, dn);
      for (std::size_t k = 0; k < d; ++k) {
        grad[i * d + k] += coef * dn[k];
        grad[j * d + k] -= coef * dn[k];
      }
    }
  return total;
}

Candidate run_restart(const Graph& g, const NormedSpace& space, std::size_t iters,
                      RandomStream rng, const StressSchedule& schedule) {
  const std::size_t n = g.order();
  const std::size_t d = space.dim();
  const double side = schedule.init_scale *
                      std::pow(static_cast<double>(std::max<std::size_t>(n, 1)),
                               1.0 / static_cast<double>(d));
  std::vector<double> coords(n * d);
  for (auto& c : coords) c = rng.uniform(0.0, side);
  PointTuple x(d, coords);

  Candidate out;
  std::vector<double> grad(n * d);
  double step = schedule.initial_step;
  double value = objective_and_gradient(space, x, g, schedule.margin, grad);
  out.report.objective_trace.push_back(value);
  for (std::size_t it = 1; it <= iters && value > 0.0; ++it) {
    PointTuple trial = x;
    for (std::size_t i = 0; i < n; ++i) {
      auto p = trial.mutable_point(i);
      for (std::size_t k = 0; k < d; ++k) p[k] -= step * grad[i * d + k];
    }
    std::vector<double> trial_grad(n * d);
    const double trial_value = objective_and_gradient(space, trial, g, schedule.margin, trial_grad);
    if (trial_value < value) {
      x = std::move(trial);
      grad = std::move(trial_grad);
      value = trial_value;
      step *= 1.2;
    } else {
      step *= 0.5;
      if (step < 1e-12) {
        // Stalled: kick every point slightly and restart the step schedule.
        for (std::size_t i = 0; i < n; ++i) {
          auto p = x.mutable_point(i);
          for (std::size_t k = 0; k < d; ++k) p[k] += rng.uniform(-0.05, 0.05);
        }
        value = objective_and_gradient(space, x, g, schedule.margin, grad);
        step = schedule.initial_step;
      }
    }
    if (schedule.trace_every != 0 && it % schedule.trace_every == 0)
      out.report.objective_trace.push_back(value);
  }
  if (out.report.objective_trace.back() != value) out.report.objective_trace.push_back(value);
  auto trace = std::move(out.report.objective_trace);
  out.report = embedding_report(space, x, g);
  out.report.objective_trace = std::move(trace);
  out.objective = value;
  return out;
}

}  // namespace

EmbeddingAttempt stress_embed(const Graph& g, const NormedSpace& space, std::size_t iters,
                              RandomStream& rng, const StressSchedule& schedule) {
  const std::size_t restarts = std::max<std::size_t>(schedule.restarts, 1);
  std::vector<Candidate> results(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    results[r] = run_restart(g, space, iters, rng.split("stress-restart", r), schedule);
    results[r].report.stream_key = rng.split("stress-restart", r).key();
    results[r].report.restart = r;
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (better(results[r], results[best])) best = r;
  return std::move(results[best].report);
}

}  // namespace geomlab
