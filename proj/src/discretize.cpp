#include "geomlab/discretize.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <set>

#include "geomlab/error.hpp"
#include "geomlab/parallel.hpp"

namespace geomlab {

int default_ell_max(std::size_t n, double D) {
  if (n < 2) return 0;
  const double v = 2.0 * D * std::log(static_cast<double>(n));
  if (v <= 1.0) return 0;
  return static_cast<int>(std::ceil(std::log2(v)));
}

int Params::ell_max_for(std::size_t n) const { return ell_max ? *ell_max : default_ell_max(n, D); }

bool Params::is_default() const {
  const Params d;
  return eps == d.eps && c0 == d.c0 && D == d.D && C_BM == d.C_BM && c_main == d.c_main &&
         ell_min == d.ell_min && !ell_max && tolerance == d.tolerance &&
         max_retries == d.max_retries && seed_completion == d.seed_completion;
}

double main_constant_bound(const Params& params) {
  return std::min({params.eps / (2.0 * std::log(320.0)),
                   params.eps * std::log(3.0 / params.c0) / 10.0, params.C_BM / 2.0});
}

namespace {

void require_tuple(const NormedSpace& space, const PointTuple& x, const char* what) {
  if (!x.empty() && x.dim() != space.dim())
    throw PreconditionError(std::string(what) + ": tuple dimension " + std::to_string(x.dim()) +
                            " does not match space dimension " + std::to_string(space.dim()));
}

std::size_t seeds_per_level(std::size_t n, double eps) {
  return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 1.0 - eps)));
}

}  // namespace

ScaleProfile scale_profile(const NormedSpace& space, const PointTuple& x, const Params& params) {
  require_tuple(space, x, "scale_profile");
  const std::size_t n = x.size();
  ScaleProfile out;
  out.ell_min = params.ell_min;
  out.ell_max = params.ell_max_for(n);
  if (out.ell_max < out.ell_min)
    throw PreconditionError("scale_profile: ell_max " + std::to_string(out.ell_max) +
                            " below ell_min " + std::to_string(out.ell_min));
  out.threshold = std::pow(static_cast<double>(n), 2.0 * params.eps);
  out.ells.assign(n, out.ell_max);
  out.saturated.assign(n, false);
  const double need = std::ceil(out.threshold);
  std::vector<char> saturated(n, 0);
  parallel_for(n, [&](std::size_t i) {
    if (need > static_cast<double>(n)) {
      saturated[i] = 1;
      return;
    }
    const auto k = static_cast<std::size_t>(std::max(need, 1.0));
    std::vector<double> dist(n);
    for (std::size_t j = 0; j < n; ++j) dist[j] = space.distance(x[i], x[j]);
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    const double radius = dist[k - 1];
    int level = out.ell_min;
    while (level <= out.ell_max && dyadic_radius(level) < radius) ++level;
    if (level > out.ell_max) {
      saturated[i] = 1;
      return;
    }
    out.ells[i] = level;
  });
  for (std::size_t i = 0; i < n; ++i) out.saturated[i] = saturated[i] != 0;
  return out;
}

const SeedLevel& SeedFamily::at(int level) const {
  for (const auto& l : levels)
    if (l.level == level) return l;
  throw PreconditionError("SeedFamily: no level " + std::to_string(level));
}

std::vector<std::size_t> SeedFamily::projected_union() const {
  std::set<std::size_t> all;
  for (const auto& l : levels) all.insert(l.projected.begin(), l.projected.end());
  return {all.begin(), all.end()};
}

SeedFamily select_seeds(const NormedSpace& space, const PointTuple& x, const ScaleProfile& profile,
                        const Params& params, const RandomStream& rng, std::size_t max_retries) {
  require_tuple(space, x, "select_seeds");
  const std::size_t n = x.size();
  if (profile.ells.size() != n) throw PreconditionError("select_seeds: profile size mismatch");
  const std::size_t m = seeds_per_level(n, params.eps);
  const int levels = profile.ell_max - profile.ell_min + 1;
  SeedFamily out;
  out.levels.resize(static_cast<std::size_t>(levels));
  std::vector<std::string> failures(out.levels.size());

  parallel_for(out.levels.size(), [&](std::size_t k) {
    SeedLevel& level = out.levels[k];
    level.level = profile.ell_min + static_cast<int>(k);
    const double r = dyadic_radius(level.level);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (profile.ells[i] == level.level) members.push_back(i);
    level.members = members.size();
    RandomStream stream = rng.split("seeds", static_cast<std::uint64_t>(level.level));
    auto first_uncovered = [&](const std::vector<std::size_t>& seeds,
                               std::vector<std::size_t>* all) -> std::size_t {
      NearestIndex index(space, r * space.box_factor());
      for (auto s : seeds) index.insert(x[s]);
      std::size_t first = n;
      for (auto i : members)
        if (seeds.empty() || !index.any_within(x[i], r)) {
          if (!all) return i;
          if (first == n) first = i;
          all->push_back(i);
        }
      return first;
    };
    std::size_t uncovered = n;
    for (std::size_t attempt = 1; attempt <= std::max<std::size_t>(max_retries, 1); ++attempt) {
      level.seeds.resize(m);
      for (auto& s : level.seeds) s = stream.below(n);
      level.attempts = attempt;
      if (members.empty()) return;
      uncovered = first_uncovered(level.seeds, nullptr);
      if (uncovered == n) return;
    }
    if (params.seed_completion && m > 0) {
      // Keep the first m - k draws of a fresh sample and cover what they miss
      // greedily (lowest uncovered index first); accept once the greedy part
      // fits in the k freed slots.
      std::vector<std::size_t> draw(m);
      for (auto& s : draw) s = stream.below(n);
      for (std::size_t freed = 1;; freed = std::min(2 * freed, m)) {
        std::vector<std::size_t> kept(draw.begin(), draw.end() - static_cast<std::ptrdiff_t>(freed));
        std::vector<std::size_t> missed;
        first_uncovered(kept, &missed);
        std::vector<std::size_t> picks;
        NearestIndex picked(space, r * space.box_factor());
        for (auto i : missed)
          if (!picked.any_within(x[i], r)) {
            picks.push_back(i);
            picked.insert(x[i]);
            if (picks.size() > freed) break;
          }
        if (picks.size() <= freed) {
          level.seeds.assign(draw.begin(), draw.end() - static_cast<std::ptrdiff_t>(picks.size()));
          level.seeds.insert(level.seeds.end(), picks.begin(), picks.end());
          level.completed = picks.size();
          if (first_uncovered(level.seeds, nullptr) == n) return;
        }
        if (freed == m) {
          uncovered = missed.empty() ? uncovered : missed.front();
          break;
        }
      }
    }
    failures[k] = "select_seeds: level " + std::to_string(level.level) + " still leaves index " +
                  std::to_string(uncovered) + " uncovered after " +
                  std::to_string(max_retries) + " draws";
  });
  for (const auto& f : failures)
    if (!f.empty()) throw BudgetExhausted(f);
  return out;
}

struct MultiscaleNet::Cache {
  mutable std::mutex mutex;
  std::map<std::pair<std::size_t, int>, std::shared_ptr<const Net>> nets;
};

MultiscaleNet::MultiscaleNet(const NormedSpace& space, std::size_t n, const Params& params,
                             const RandomStream& rng, const NetOptions& options)
    : space_(space), n_(n), c0_(params.c0), max_level_(default_ell_max(n, params.D)),
      cache_(std::make_unique<Cache>()) {
  if (n < 2) throw PreconditionError("MultiscaleNet: need n >= 2");
  if (!(params.c0 > 0.0 && params.c0 < 1.0))
    throw PreconditionError("MultiscaleNet: c0 must lie in (0, 1)");
  const Vector origin(space.dim(), 0.0);
  const double radius = params.D * std::log(static_cast<double>(n));
  RandomStream base_rng = rng.split("base-net");
  RandomStream template_rng = rng.split("template-net");
  base_ = greedy_net(space, origin, radius, 1.0, base_rng, options);
  template_ = greedy_net(space, origin, 1.0, params.c0, template_rng, options);
  base_index_ = std::make_unique<NearestIndex>(space, space.box_factor());
  for (std::size_t i = 0; i < base_.points.size(); ++i) base_index_->insert(base_.points[i]);
  template_index_ = std::make_unique<NearestIndex>(space, params.c0 * space.box_factor());
  for (std::size_t i = 0; i < template_.points.size(); ++i)
    template_index_->insert(template_.points[i]);
}

MultiscaleNet::MultiscaleNet(MultiscaleNet&&) noexcept = default;
MultiscaleNet& MultiscaleNet::operator=(MultiscaleNet&&) noexcept = default;
MultiscaleNet::~MultiscaleNet() = default;

std::pair<std::size_t, double> MultiscaleNet::project_base(ConstPoint p) const {
  return base_index_->nearest(p);
}

void MultiscaleNet::check_level(std::size_t base_index, int level) const {
  if (base_index >= base_.points.size())
    throw PreconditionError("MultiscaleNet: base index " + std::to_string(base_index) +
                            " out of range");
  if (level < 0 || level > max_level_)
    throw PreconditionError("MultiscaleNet: level " + std::to_string(level) + " outside [0, " +
                            std::to_string(max_level_) + "]");
}

LocalProjection MultiscaleNet::project_local(std::size_t base_index, int level,
                                             ConstPoint p) const {
  check_level(base_index, level);
  const double r = dyadic_radius(level);
  const auto y = base_.points[base_index];
  const std::size_t d = space_.dim();
  Vector scaled(d);
  for (std::size_t k = 0; k < d; ++k) scaled[k] = (p[k] - y[k]) / r;
  LocalProjection out;
  out.index = template_index_->nearest(scaled).first;
  const auto t = template_.points[out.index];
  out.point.resize(d);
  for (std::size_t k = 0; k < d; ++k) out.point[k] = y[k] + r * t[k];
  out.distance = space_.distance(p, out.point);
  return out;
}

std::shared_ptr<const Net> MultiscaleNet::local_net(std::size_t base_index, int level) const {
  check_level(base_index, level);
  const auto key = std::pair{base_index, level};
  std::lock_guard lock(cache_->mutex);
  if (auto it = cache_->nets.find(key); it != cache_->nets.end()) return it->second;
  auto net = std::make_shared<Net>();
  const double r = dyadic_radius(level);
  const auto y = base_.points[base_index];
  net->center.assign(y.begin(), y.end());
  net->radius = r;
  net->mesh = c0_ * r;
  net->points = PointSet(space_.dim());
  net->points.reserve(template_.points.size());
  Vector p(space_.dim());
  for (std::size_t i = 0; i < template_.points.size(); ++i) {
    const auto t = template_.points[i];
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = y[k] + r * t[k];
    net->points.push_back(p);
  }
  cache_->nets.emplace(key, net);
  return net;
}

std::size_t MultiscaleNet::cached_local_nets() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->nets.size();
}

LongDistanceSet::LongDistanceSet(std::size_t n)
    : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

std::size_t LongDistanceSet::ordered_size() const {
  std::size_t total = 0;
  for (auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t LongDistanceSet::unordered_size() const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (contains_unordered(i, j)) ++total;
  return total;
}

std::vector<std::pair<std::size_t, std::size_t>> LongDistanceSet::short_pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j && !contains(i, j)) out.emplace_back(i, j);
  return out;
}

LongDistanceSet LongDistanceSet::from_short_pairs(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& short_pairs) {
  LongDistanceSet out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) out.insert(i, j);
  for (const auto& [i, j] : short_pairs) {
    if (i >= n || j >= n || i == j)
      throw PreconditionError("LongDistanceSet: invalid pair (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
    out.bits_[i * out.words_ + j / 64] &= ~(std::uint64_t{1} << (j % 64));
  }
  return out;
}

LongDistanceSet long_distances(const NormedSpace& space, const PointTuple& xhat,
                               const std::vector<int>& ells) {
  const std::size_t n = xhat.size();
  if (ells.size() != n) throw PreconditionError("long_distances: profile size mismatch");
  LongDistanceSet out(n);
  // Rows touch disjoint words, so the parallel writes do not overlap.
  parallel_for(n, [&](std::size_t i) {
    const double bound = dyadic_radius(ells[i]) / 3.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && space.distance(xhat[i], xhat[j]) > bound) out.insert(i, j);
  });
  return out;
}

LongDistanceSet long_distances(const NormedSpace& space, const DiscretizationRecord& rec) {
  return long_distances(space, rec.xhat, rec.profile.ells);
}

DiscretizationRecord discretize(const NormedSpace& space, const PointTuple& x, std::size_t degree,
                                const Params& params, const RandomStream& rng,
                                const MultiscaleNet* net) {
  require_tuple(space, x, "discretize");
  const std::size_t n = x.size();
  const auto domain = check_domain(space, x, degree, params.D);
  if (!domain.ok())
    throw PreconditionError("discretize: tuple is outside the domain (" +
                            to_string(domain.reason) + " at index " +
                            std::to_string(domain.index.value_or(0)) + ")");
  if (params.ell_min < 0) throw PreconditionError("discretize: ell_min must be >= 0");

  std::optional<MultiscaleNet> owned;
  if (!net) {
    owned.emplace(space, n, params, rng.split("net"));
    net = &*owned;
  }
  if (net->n() != n || net->space().label() != space.label() ||
      net->space().dim() != space.dim() || net->c0() != params.c0 ||
      net->base_radius() != params.D * std::log(static_cast<double>(n)))
    throw PreconditionError("discretize: multiscale net was built for a different instance");

  DiscretizationRecord rec;
  rec.space_label = space.label();
  rec.degree = degree;
  rec.params = params;
  rec.profile = scale_profile(space, x, params);
  if (rec.profile.ell_max > net->max_level())
    throw PreconditionError("discretize: ell_max " + std::to_string(rec.profile.ell_max) +
                            " exceeds the net's top level " + std::to_string(net->max_level()));
  rec.seeds = select_seeds(space, x, rec.profile, params, rng, params.max_retries);
  for (auto& level : rec.seeds.levels) {
    level.projected.resize(level.seeds.size());
    for (std::size_t k = 0; k < level.seeds.size(); ++k)
      level.projected[k] = net->project_base(x[level.seeds[k]]).first;
  }

  // Projection onto each level's anchor set; insertion in ascending base
  // index order makes ties resolve to the lowest base index.
  std::vector<std::unique_ptr<NearestIndex>> anchor_index(rec.seeds.levels.size());
  std::vector<std::vector<std::size_t>> anchor_ids(rec.seeds.levels.size());
  for (std::size_t k = 0; k < rec.seeds.levels.size(); ++k) {
    const auto& level = rec.seeds.levels[k];
    std::set<std::size_t> ids(level.projected.begin(), level.projected.end());
    anchor_ids[k].assign(ids.begin(), ids.end());
    anchor_index[k] = std::make_unique<NearestIndex>(
        space, dyadic_radius(level.level) * space.box_factor());
    for (auto id : anchor_ids[k]) anchor_index[k]->insert(net->base().points[id]);
  }

  rec.anchors.assign(n, 0);
  rec.local_indices.assign(n, 0);
  std::vector<double> coords(n * space.dim());
  std::vector<double> anchor_coords(n * space.dim());
  parallel_for(n, [&](std::size_t i) {
    const auto k = static_cast<std::size_t>(rec.profile.ells[i] - rec.profile.ell_min);
    if (anchor_ids[k].empty())
      throw Error("discretize: level " + std::to_string(rec.profile.ells[i]) + " has no seeds");
    const std::size_t anchor = anchor_ids[k][anchor_index[k]->nearest(x[i]).first];
    const auto local = net->project_local(anchor, rec.profile.ells[i], x[i]);
    rec.anchors[i] = anchor;
    rec.local_indices[i] = local.index;
    const auto a = net->base().points[anchor];
    std::copy(a.begin(), a.end(),
              anchor_coords.begin() + static_cast<std::ptrdiff_t>(i * space.dim()));
    std::copy(local.point.begin(), local.point.end(),
              coords.begin() + static_cast<std::ptrdiff_t>(i * space.dim()));
  });
  rec.xhat = PointTuple(space.dim(), std::move(coords));
  rec.anchor_points = PointTuple(space.dim(), std::move(anchor_coords));
  rec.L = long_distances(space, rec.xhat, rec.profile.ells);
  rec.base_size = net->base().points.size();
  rec.local_size = net->local_size();
  std::set<std::pair<std::size_t, int>> touched;
  for (std::size_t i = 0; i < n; ++i) touched.emplace(rec.anchors[i], rec.profile.ells[i]);
  rec.touched.assign(touched.begin(), touched.end());
  return rec;
}

bool regime_predicate(std::size_t n, std::size_t dim, std::size_t degree, double eps) {
  const double lhs = static_cast<double>(dim) * std::log(320.0);
  const double rhs = eps * std::log(static_cast<double>(n)) - std::log(static_cast<double>(degree + 1));
  return lhs <= rhs;
}

bool DiscretizationAudit::ok() const {
  const bool unconditional = proximity_violations == 0 && profile_violations == 0 &&
                             chain_violations == 0 && factorization && cardinality_ok;
  return unconditional && (!regime || conditional_ok());
}

DiscretizationAudit check_discretization(const NormedSpace& space, const PointTuple& x,
                                         const DiscretizationRecord& rec, bool force_conditional) {
  require_tuple(space, x, "check_discretization");
  const std::size_t n = x.size();
  if (rec.size() != n || rec.xhat.size() != n || rec.anchor_points.size() != n || rec.profile.ells.size() != n)
    throw PreconditionError("check_discretization: record does not match the tuple");
  const Params& params = rec.params;
  const auto& ells = rec.profile.ells;
  const double c0 = params.c0;

  DiscretizationAudit out;
  out.n = n;
  out.dim = space.dim();
  out.degree = rec.degree;
  auto note = [&](std::string check, std::size_t i, std::optional<std::size_t> j, double value,
                  double bound) {
    if (out.violations.size() < DiscretizationAudit::kViolationCap)
      out.violations.push_back({std::move(check), i, j, value, bound});
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double r = dyadic_radius(ells[i]);
    const double to_anchor = space.distance(x[i], rec.anchor_points[i]);
    if (to_anchor > r + 1.0) {
      ++out.proximity_violations;
      note("anchor-distance", i, std::nullopt, to_anchor, r + 1.0);
    }
    const double to_xhat = space.distance(x[i], rec.xhat[i]);
    ++out.proximity_checked;
    if (to_xhat > c0 * r + 1.0) {
      ++out.proximity_violations;
      note("xhat-distance", i, std::nullopt, to_xhat, c0 * r + 1.0);
    }
  }

  // Profile count conditions.
  std::vector<std::size_t> count_at(n), count_below(n);
  parallel_for(n, [&](std::size_t i) {
    const double r = dyadic_radius(ells[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const double d = space.distance(x[i], x[j]);
      if (d <= r) ++count_at[i];
      if (d <= r / 2.0) ++count_below[i];
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    const bool reached = static_cast<double>(count_at[i]) >= rec.profile.threshold;
    const bool sat = rec.profile.saturated[i];
    bool bad = ells[i] < rec.profile.ell_min || ells[i] > rec.profile.ell_max;
    if (sat)
      bad = bad || ells[i] != rec.profile.ell_max || reached;
    else
      bad = bad || !reached ||
            (ells[i] > rec.profile.ell_min &&
             static_cast<double>(count_below[i]) >= rec.profile.threshold);
    if (bad) {
      ++out.profile_violations;
      note("profile", i, std::nullopt, static_cast<double>(count_at[i]), rec.profile.threshold);
    }
  }

  // Close pairs: unconditional chain, and the conditional claims if in force.
  out.regime_lhs = static_cast<double>(out.dim) * std::log(320.0);
  out.regime_rhs =
      params.eps * std::log(static_cast<double>(n)) - std::log(static_cast<double>(rec.degree + 1));
  out.regime = regime_predicate(n, out.dim, rec.degree, params.eps);
  const bool conditional = out.regime || force_conditional;

  out.min_radius = n == 0 ? 0.0 : dyadic_radius(*std::min_element(ells.begin(), ells.end()));
  if (conditional)
    for (std::size_t i = 0; i < n; ++i)
      if (dyadic_radius(ells[i]) < 36.0) {
        ++out.scale_lb_violations;
        note("scale-lb", i, std::nullopt, dyadic_radius(ells[i]), 36.0);
      }

  NearestIndex index(space, 2.0 * space.box_factor());
  for (std::size_t i = 0; i < n; ++i) index.insert(x[i]);
  for (std::size_t i = 0; i < n; ++i) {
    const double ri = dyadic_radius(ells[i]);
    std::vector<std::size_t> close;
    index.for_each_within(x[i], 2.0, [&](std::size_t j, double) {
      if (j != i) close.push_back(j);
    });
    std::sort(close.begin(), close.end());
    for (auto j : close) {
      ++out.close_pairs;
      const double rj = dyadic_radius(ells[j]);
      const double dhat = space.distance(rec.xhat[i], rec.xhat[j]);
      if (rj > 2.0 * (ri + 2.0)) {
        ++out.chain_violations;
        note("chain-scale", i, j, rj, 2.0 * (ri + 2.0));
      }
      const double chain_bound = 4.0 + 3.0 * c0 * ri + 4.0 * c0;
      if (dhat > chain_bound) {
        ++out.chain_violations;
        note("chain-xhat", i, j, dhat, chain_bound);
      }
      if (conditional) {
        if (dhat > ri / 6.0) {
          ++out.close_preserved_violations;
          note("close-preserved", i, j, dhat, ri / 6.0);
        }
        if (rec.L.contains(i, j)) {
          ++out.exclusion_violations;
          note("exclusion", i, j, dhat, ri / 3.0);
        }
      }
    }
  }

  if (conditional) {
    std::vector<std::size_t> counts(n, 0);
    parallel_for(n, [&](std::size_t i) {
      const double bound = dyadic_radius(ells[i]) / 3.0;
      for (std::size_t j = 0; j < n; ++j)
        if (space.distance(rec.xhat[i], rec.xhat[j]) <= bound) ++counts[i];
    });
    for (std::size_t i = 0; i < n; ++i) {
      out.crowd_max_count = std::max(out.crowd_max_count, counts[i]);
      if (static_cast<double>(counts[i]) > rec.profile.threshold) {
        ++out.crowd_violations;
        note("crowd", i, std::nullopt, static_cast<double>(counts[i]), rec.profile.threshold);
      }
    }
  }

  const auto recomputed = long_distances(space, rec.xhat, ells);
  out.factorization = recomputed == rec.L;
  if (!out.factorization) note("factorization", 0, std::nullopt, 0.0, 0.0);
  out.L_ordered = rec.L.ordered_size();
  out.L_unordered = rec.L.unordered_size();

  const double logn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  out.base_size = rec.base_size;
  out.base_bound = std::pow(3.0 * params.D * logn, static_cast<double>(out.dim));
  out.local_size = rec.local_size;
  out.local_bound = std::pow(3.0 / c0, static_cast<double>(out.dim));
  out.cardinality_ok = static_cast<double>(out.base_size) <= out.base_bound &&
                       static_cast<double>(out.local_size) <= out.local_bound;
  if (!out.cardinality_ok)
    note("cardinality", 0, std::nullopt, static_cast<double>(out.base_size), out.base_bound);
  return out;
}

}  // namespace geomlab
