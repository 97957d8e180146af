#pragma once

// Scales of separation, seeds, multiscale nets, the discretization map and
// the long-distance set.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geomlab/geom.hpp"

namespace geomlab {

struct Params {
  double eps = 0.1;
  double c0 = 0.01;
  /// Diameter constant: the domain is the ball of radius D log n.
  double D = 8.0;
  double C_BM = 10.0;
  double c_main = 0.001;
  int ell_min = 0;
  /// Defaults to ceil(log2(2 D log n)).
  std::optional<int> ell_max;
  double tolerance = 1e-9;
  std::size_t max_retries = 64;
  /// When every uniform seed draw misses some index, complete a draw with
  /// greedily chosen seeds instead of failing.
  bool seed_completion = true;

  [[nodiscard]] int ell_max_for(std::size_t n) const;
  /// Whether every constant equals its default.
  [[nodiscard]] bool is_default() const;
};

/// ceil(log2(2 D log n)), never below 0.
int default_ell_max(std::size_t n, double D);

/// min(eps / (2 log 320), eps log(3/c0) / 10, C_BM / 2): the largest main
/// constant the counting argument supports for the given constants.
double main_constant_bound(const Params& params);

/// r_l = 2^l.
inline double dyadic_radius(int level) { return std::ldexp(1.0, level); }

struct ScaleProfile {
  std::vector<int> ells;
  /// No level in range reached the threshold; the index sits at ell_max.
  std::vector<bool> saturated;
  /// n^{2 eps}, compared as a real against integer counts.
  double threshold = 0.0;
  int ell_min = 0;
  int ell_max = 0;
};

/// l_i = min{l in [ell_min, ell_max] : |{j : d(x_i, x_j) <= 2^l}| >= n^{2 eps}},
/// counting j = i.
ScaleProfile scale_profile(const NormedSpace& space, const PointTuple& x, const Params& params);

struct SeedLevel {
  int level = 0;
  /// Indices into x, drawn uniformly with replacement; floor(n^{1-eps}) of them.
  std::vector<std::size_t> seeds;
  /// Base-net index of each seed's projection (same order as seeds).
  std::vector<std::size_t> projected;
  /// Number of indices with l_i == level.
  std::size_t members = 0;
  /// Draws used before the covering property verified (1 = first draw).
  std::size_t attempts = 0;
  /// Seeds chosen greedily to complete the last draw (0 for a pure draw).
  std::size_t completed = 0;
};

struct SeedFamily {
  std::vector<SeedLevel> levels;
  [[nodiscard]] const SeedLevel& at(int level) const;
  /// Distinct base-net indices over every level, sorted.
  [[nodiscard]] std::vector<std::size_t> projected_union() const;
};

/// For each level in [ell_min, ell_max], draws floor(n^{1-eps}) seeds from x on
/// the substream ("seeds", level) and checks that every index at that level
/// has a seed within 2^level; redraws up to max_retries times. If every draw
/// fails and params.seed_completion is set, a further draw is completed
/// greedily: its last k entries are replaced by uncovered indices picked
/// lowest first, doubling k until the picks fit. Throws BudgetExhausted
/// naming the level and an uncovered index otherwise. Projections are left
/// empty.
SeedFamily select_seeds(const NormedSpace& space, const PointTuple& x, const ScaleProfile& profile,
                        const Params& params, const RandomStream& rng, std::size_t max_retries);

struct LocalProjection {
  std::size_t index = 0;
  Vector point;
  double distance = 0.0;
};

/// Coarse 1-net N_0 of B(0, D log n) plus, at every base point y and level l,
/// the fine net N(y, 2^l; c0 2^l). Every fine net is the image of one c0-net
/// T of the unit ball under v -> y + 2^l v, so fine nets are materialized
/// only on request and projections use T directly.
class MultiscaleNet {
 public:
  MultiscaleNet(const NormedSpace& space, std::size_t n, const Params& params,
                const RandomStream& rng, const NetOptions& options = {});

  MultiscaleNet(MultiscaleNet&&) noexcept;
  MultiscaleNet& operator=(MultiscaleNet&&) noexcept;
  ~MultiscaleNet();

  [[nodiscard]] const NormedSpace& space() const { return space_; }
  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] double c0() const { return c0_; }
  [[nodiscard]] double base_radius() const { return base_.radius; }
  [[nodiscard]] int max_level() const { return max_level_; }
  [[nodiscard]] const Net& base() const { return base_; }
  [[nodiscard]] const Net& unit_template() const { return template_; }
  /// |N(y, r; c0 r)|, the same for every base point and level.
  [[nodiscard]] std::size_t local_size() const { return template_.points.size(); }

  /// Nearest base-net point to p.
  [[nodiscard]] std::pair<std::size_t, double> project_base(ConstPoint p) const;

  /// Nearest point of N(base point, 2^level; c0 2^level) to p.
  [[nodiscard]] LocalProjection project_local(std::size_t base_index, int level,
                                              ConstPoint p) const;

  /// N(base point, 2^level; c0 2^level), built on first access and cached.
  /// Safe to call concurrently.
  [[nodiscard]] std::shared_ptr<const Net> local_net(std::size_t base_index, int level) const;
  [[nodiscard]] std::size_t cached_local_nets() const;

 private:
  struct Cache;
  void check_level(std::size_t base_index, int level) const;

  NormedSpace space_;
  std::size_t n_ = 0;
  double c0_ = 0.0;
  int max_level_ = 0;
  Net base_;
  Net template_;
  std::unique_ptr<NearestIndex> base_index_;
  std::unique_ptr<NearestIndex> template_index_;
  std::unique_ptr<Cache> cache_;
};

/// Ordered pairs (i, j), i != j, stored as an n x n bit matrix.
class LongDistanceSet {
 public:
  LongDistanceSet() = default;
  explicit LongDistanceSet(std::size_t n);

  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] bool contains(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U;
  }
  /// (i, j) or (j, i) in L.
  [[nodiscard]] bool contains_unordered(std::size_t i, std::size_t j) const {
    return contains(i, j) || contains(j, i);
  }
  void insert(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
  [[nodiscard]] std::size_t ordered_size() const;
  /// Number of unordered pairs {i, j} with (i, j) or (j, i) in L.
  [[nodiscard]] std::size_t unordered_size() const;
  /// Ordered pairs (i, j), i != j, NOT in L, in row-major order.
  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> short_pairs() const;
  /// Rebuilds the set from its complement.
  static LongDistanceSet from_short_pairs(std::size_t n,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& short_pairs);

  bool operator==(const LongDistanceSet&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// L = {(i, j) : i != j, ||xhat_i - xhat_j|| > 2^{ells_i} / 3}.
LongDistanceSet long_distances(const NormedSpace& space, const PointTuple& xhat,
                               const std::vector<int>& ells);

struct DiscretizationRecord {
  std::string space_label;
  std::size_t degree = 0;
  Params params;
  ScaleProfile profile;
  SeedFamily seeds;
  /// Base-net index of the anchor of each x_i.
  std::vector<std::size_t> anchors;
  /// Coordinates of the anchors.
  PointTuple anchor_points;
  /// Index of xhat_i in the fine net at (anchor_i, l_i).
  std::vector<std::size_t> local_indices;
  PointTuple xhat;
  LongDistanceSet L;
  std::size_t base_size = 0;
  std::size_t local_size = 0;
  /// Distinct (anchor, level) fine nets touched, sorted.
  std::vector<std::pair<std::size_t, int>> touched;

  [[nodiscard]] std::size_t size() const { return anchors.size(); }
};

/// Full discretization of x. Requires x in the domain for (Delta, D) and
/// throws PreconditionError with the domain reason otherwise. Builds the
/// multiscale net on the substream "net" unless one is supplied (it must
/// match n, the space and the constants).
DiscretizationRecord discretize(const NormedSpace& space, const PointTuple& x, std::size_t degree,
                                const Params& params, const RandomStream& rng,
                                const MultiscaleNet* net = nullptr);

LongDistanceSet long_distances(const NormedSpace& space, const DiscretizationRecord& rec);

struct AuditViolation {
  std::string check;
  std::size_t i = 0;
  std::optional<std::size_t> j;
  double value = 0.0;
  double bound = 0.0;
};

struct DiscretizationAudit {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t degree = 0;

  std::size_t proximity_checked = 0;
  std::size_t proximity_violations = 0;
  std::size_t profile_violations = 0;

  /// Pairs with d(x_i, x_j) <= 2 (ordered) and their chain checks.
  std::size_t close_pairs = 0;
  std::size_t chain_violations = 0;

  /// 320^d <= n^eps / (Delta + 1), evaluated in log space.
  bool regime = false;
  double regime_lhs = 0.0;
  double regime_rhs = 0.0;
  double min_radius = 0.0;
  std::size_t scale_lb_violations = 0;
  std::size_t close_preserved_violations = 0;
  std::size_t crowd_violations = 0;
  std::size_t crowd_max_count = 0;
  std::size_t exclusion_violations = 0;

  bool factorization = true;
  std::size_t L_ordered = 0;
  std::size_t L_unordered = 0;

  std::size_t base_size = 0;
  double base_bound = 0.0;
  std::size_t local_size = 0;
  double local_bound = 0.0;
  bool cardinality_ok = true;

  /// First violations in check order, capped at kViolationCap.
  std::vector<AuditViolation> violations;
  static constexpr std::size_t kViolationCap = 100;

  /// Unconditional checks pass and, when the regime holds, the conditional
  /// ones as well.
  [[nodiscard]] bool ok() const;
  [[nodiscard]] bool conditional_ok() const {
    return scale_lb_violations == 0 && close_preserved_violations == 0 && crowd_violations == 0 &&
           exclusion_violations == 0;
  }
};

/// 320^d <= n^eps / (Delta + 1).
bool regime_predicate(std::size_t n, std::size_t dim, std::size_t degree, double eps);

/// Instance-wise audit of a record against x: proximity bounds, the profile's
/// count conditions, the unconditional chain for close pairs, the regime
/// predicate and, when it holds, the conditional claims (or when
/// `force_conditional` is set, for supplementary runs), the factorization of
/// L through (xhat, l) and the net cardinality bounds.
DiscretizationAudit check_discretization(const NormedSpace& space, const PointTuple& x,
                                         const DiscretizationRecord& rec,
                                         bool force_conditional = false);

}  // namespace geomlab
