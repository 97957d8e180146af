#pragma once

// Finite-dimensional normed spaces, nets and nearest-point projection.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geomlab/random.hpp"

namespace geomlab {

using Vector = std::vector<double>;
using ConstPoint = std::span<const double>;

/// Ordered sequence of points of a common dimension, stored row-major.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> coords);
  static PointSet from_rows(const std::vector<Vector>& rows);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  [[nodiscard]] bool empty() const { return coords_.empty(); }

  [[nodiscard]] ConstPoint operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  [[nodiscard]] std::span<double> mutable_point(std::size_t i) {
    return {coords_.data() + i * dim_, dim_};
  }
  void push_back(ConstPoint p);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  [[nodiscard]] const std::vector<double>& coords() const { return coords_; }
  [[nodiscard]] std::vector<Vector> rows() const;

  bool operator==(const PointSet&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// R^d with a norm. Built-in kinds (lp, linf) evaluate without allocation;
/// custom norms wrap a user evaluator validated on samples at registration.
class NormedSpace {
 public:
  enum class Kind { lp, linf, custom };
  using Evaluator = std::function<double(ConstPoint)>;

  static NormedSpace lp(std::size_t dim, double p);
  static NormedSpace linf(std::size_t dim);
  /// Registers a custom norm. Samples `samples` random vectors and rejects the
  /// evaluator (PreconditionError) if definiteness, homogeneity or the
  /// triangle inequality fail beyond `tolerance` (relative to the magnitudes).
  static NormedSpace custom(std::size_t dim, std::string name, Evaluator norm,
                            RandomStream& rng, double tolerance = 1e-9,
                            std::size_t samples = 2000);
  /// Parses "lp:<p>" or "linf". Custom labels cannot be parsed.
  static NormedSpace from_label(std::string_view label, std::size_t dim);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double p() const { return p_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  /// A constant K with ||v||_inf <= K ||v|| for all v. Exact (1) for lp and
  /// linf; a sampled estimate with a safety factor for custom norms.
  [[nodiscard]] double box_factor() const { return box_factor_; }
  [[nodiscard]] bool exact_box() const { return kind_ != Kind::custom; }

  [[nodiscard]] double norm(ConstPoint v) const;
  /// ||u - v||. Throws PreconditionError on dimension mismatch.
  [[nodiscard]] double distance(ConstPoint u, ConstPoint v) const;
  /// A (sub)gradient of the norm at v, written to `out`. Zero at v = 0.
  void norm_gradient(ConstPoint v, std::span<double> out) const;

 private:
  NormedSpace(std::size_t dim, Kind kind, double p, std::string label);

  std::size_t dim_ = 0;
  Kind kind_ = Kind::lp;
  double p_ = 2.0;
  std::string label_;
  double box_factor_ = 1.0;
  std::shared_ptr<const Evaluator> custom_;
};

/// Renders an lp label, e.g. lp_label(2) == "lp:2.0".
std::string lp_label(double p);

/// Free-function form of NormedSpace::distance.
inline double distance(const NormedSpace& space, ConstPoint u, ConstPoint v) {
  return space.distance(u, v);
}

/// Spatial hash over a growing point set. Cells are axis-aligned cubes of
/// side `cell`; the box factor of the space turns cube distances into norm
/// lower bounds. Falls back to a linear scan in high dimension or when the
/// box factor is not exact.
class NearestIndex {
 public:
  NearestIndex(NormedSpace space, double cell);

  std::size_t insert(ConstPoint p);
  [[nodiscard]] const PointSet& points() const { return points_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] const NormedSpace& space() const { return space_; }

  /// Some stored point within distance r of q, if any.
  [[nodiscard]] std::optional<std::size_t> any_within(ConstPoint q, double r) const;
  /// Calls fn(index, distance) for every stored point within distance r of q.
  void for_each_within(ConstPoint q, double r,
                       const std::function<void(std::size_t, double)>& fn) const;
  /// Nearest stored point; ties broken by lowest index. Requires size() > 0.
  [[nodiscard]] std::pair<std::size_t, double> nearest(ConstPoint q) const;

 private:
  static constexpr std::size_t kMaxGridDim = 4;
  using CellKey = std::array<std::int64_t, kMaxGridDim>;
  struct KeyHash {
    std::size_t operator()(const CellKey& k) const noexcept;
  };

  [[nodiscard]] CellKey cell_of(ConstPoint p) const;
  template <class Fn>
  void visit_shell(const CellKey& center, std::int64_t radius, Fn&& fn) const;

  NormedSpace space_;
  double cell_;
  bool use_grid_;
  PointSet points_;
  std::unordered_map<CellKey, std::vector<std::size_t>, KeyHash> cells_;
};

struct NetOptions {
  /// Construction stops after this many consecutive ball samples that were
  /// already covered by the net.
  std::size_t coverage_run = 20000;
  /// Hard cap on the number of ball samples drawn.
  std::size_t max_samples = 200000000;
  /// After sampling, sweep a grid of the ball's bounding box (d <= 4): a cell
  /// is settled when one net point's ball holds all its corners, which by
  /// convexity covers the whole cell. Unsettled cells are halved up to
  /// `sweep_depth` times; uncovered test points found in the smallest cells
  /// are inserted. Skipped when the grid would exceed `max_sweep_cells`.
  bool sweep = true;
  int sweep_depth = 5;
  std::size_t max_sweep_cells = std::size_t{1} << 22;
};

/// An r-net of the closed ball B(center, R). Points are pairwise > mesh apart.
struct Net {
  Vector center;
  double radius = 0.0;
  double mesh = 0.0;
  PointSet points;
  std::size_t samples_drawn = 0;
  /// Points added by the covering sweep.
  std::size_t sweep_inserted = 0;
};

/// Uniform sample from B(center, R) by rejection from a bounding box.
Vector sample_ball(const NormedSpace& space, ConstPoint center, double radius,
                   RandomStream& rng);

/// Greedy net: starts from {center} and inserts every rejection-sampled point
/// of the ball that lies farther than r from the current net, until a run of
/// `coverage_run` consecutive samples is covered, then runs the covering
/// sweep. The result is an r-packing that covers the ball.
Net greedy_net(const NormedSpace& space, ConstPoint center, double radius, double mesh,
               RandomStream& rng, const NetOptions& options = {});

struct CoverageCheck {
  std::size_t samples = 0;
  std::size_t uncovered = 0;
  double worst_distance = 0.0;
};

/// Monte Carlo covering check of a net on its ball.
CoverageCheck check_covering(const NormedSpace& space, const Net& net, std::size_t samples,
                             RandomStream& rng);

/// Smallest pairwise distance among the net points (infinity for < 2 points).
double min_separation(const NormedSpace& space, const PointSet& points);

struct Projection {
  std::size_t index = 0;
  Vector point;
  double distance = 0.0;
};

/// Nearest candidate to p, ties broken by lowest index.
Projection project_to_set(const NormedSpace& space, ConstPoint p, const PointSet& candidates);

/// (max over sampled directions of |v|_B/|v|_A) * (max of |v|_A/|v|_B): the
/// distortion of the identity map witnessed on the sample. A lower bound on
/// the true identity distortion; the axes and sign diagonals are always
/// included in the sample.
double identity_distortion(const NormedSpace& a, const NormedSpace& b, std::size_t sample_dirs,
                           RandomStream& rng);

}  // namespace geomlab
