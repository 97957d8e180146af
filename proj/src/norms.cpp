#include "geomlab/norms.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "geomlab/error.hpp"

namespace geomlab {

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0 && !coords_.empty()) throw PreconditionError("PointSet: zero dimension");
  if (dim_ != 0 && coords_.size() % dim_ != 0)
    throw PreconditionError("PointSet: coordinate count is not a multiple of the dimension");
}

PointSet PointSet::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return PointSet{};
  PointSet out(rows.front().size());
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r);
  return out;
}

void PointSet::push_back(ConstPoint p) {
  if (p.size() != dim_)
    throw PreconditionError("PointSet: point of dimension " + std::to_string(p.size()) +
                            " pushed into a set of dimension " + std::to_string(dim_));
  coords_.insert(coords_.end(), p.begin(), p.end());
}

std::vector<Vector> PointSet::rows() const {
  std::vector<Vector> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.emplace_back((*this)[i].begin(), (*this)[i].end());
  return out;
}

// ---------------------------------------------------------------------------

NormedSpace::NormedSpace(std::size_t dim, Kind kind, double p, std::string label)
    : dim_(dim), kind_(kind), p_(p), label_(std::move(label)) {
  if (dim_ == 0) throw PreconditionError("normed space needs a positive dimension");
}

std::string lp_label(double p) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), p);
  std::string s(buf.data(), end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return "lp:" + s;
}

NormedSpace NormedSpace::lp(std::size_t dim, double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw PreconditionError("lp norm needs a finite exponent p >= 1");
  return NormedSpace(dim, Kind::lp, p, lp_label(p));
}

NormedSpace NormedSpace::linf(std::size_t dim) {
  return NormedSpace(dim, Kind::linf, std::numeric_limits<double>::infinity(), "linf");
}

NormedSpace NormedSpace::from_label(std::string_view label, std::size_t dim) {
  if (label == "linf") return linf(dim);
  if (label.starts_with("lp:")) {
    const std::string_view digits = label.substr(3);
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec != std::errc{} || ptr != digits.data() + digits.size())
      throw PreconditionError("bad lp exponent in space label '" + std::string(label) + "'");
    return lp(dim, p);
  }
  throw PreconditionError("unknown space label '" + std::string(label) +
                          "' (expected lp:<p> or linf)");
}

NormedSpace NormedSpace::custom(std::size_t dim, std::string name, Evaluator norm,
                                RandomStream& rng, double tolerance, std::size_t samples) {
  if (!norm) throw PreconditionError("custom norm needs an evaluator");
  NormedSpace space(dim, Kind::custom, 0.0, "custom:" + name);
  space.custom_ = std::make_shared<const Evaluator>(std::move(norm));

  const auto& f = *space.custom_;
  auto fail = [&](const std::string& what) {
    throw PreconditionError("custom norm '" + name + "' rejected: " + what);
  };
  const Vector zero(dim, 0.0);
  if (std::abs(f(zero)) > tolerance) fail("norm(0) != 0");

  double box = 0.0;
  Vector u(dim), v(dim), w(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    std::fill(u.begin(), u.end(), 0.0);
    u[k] = 1.0;
    const double nu = f(u);
    if (!(nu > 0.0)) fail("non-positive norm of a basis vector");
    box = std::max(box, 1.0 / nu);
  }
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < dim; ++k) {
      u[k] = rng.normal();
      v[k] = rng.normal();
    }
    const double t = rng.uniform(-3.0, 3.0);
    const double nu = f(u);
    const double nv = f(v);
    if (!(nu > 0.0) || !(nv > 0.0)) fail("non-positive norm of a non-zero vector");
    double inf = 0.0;
    for (double x : u) inf = std::max(inf, std::abs(x));
    box = std::max(box, inf / nu);

    for (std::size_t k = 0; k < dim; ++k) w[k] = t * u[k];
    if (std::abs(f(w) - std::abs(t) * nu) > tolerance * (1.0 + std::abs(t) * nu))
      fail("absolute homogeneity violated");
    for (std::size_t k = 0; k < dim; ++k) w[k] = u[k] + v[k];
    if (f(w) > nu + nv + tolerance * (1.0 + nu + nv)) fail("triangle inequality violated");
  }
  space.box_factor_ = 1.5 * box;
  return space;
}

double NormedSpace::norm(ConstPoint v) const {
  switch (kind_) {
    case Kind::linf: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    }
    case Kind::lp: {
      if (p_ == 1.0) {
        double s = 0.0;
        for (double x : v) s += std::abs(x);
        return s;
      }
      if (p_ == 2.0) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
      }
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      if (m == 0.0) return 0.0;
      double s = 0.0;
      for (double x : v) s += std::pow(std::abs(x) / m, p_);
      return m * std::pow(s, 1.0 / p_);
    }
    case Kind::custom:
      return (*custom_)(v);
  }
  return 0.0;
}

double NormedSpace::distance(ConstPoint u, ConstPoint v) const {
  if (u.size() != dim_ || v.size() != dim_)
    throw PreconditionError("distance: dimension mismatch (space " + std::to_string(dim_) +
                            ", points " + std::to_string(u.size()) + " and " +
                            std::to_string(v.size()) + ")");
  switch (kind_) {
    case Kind::linf: {
      double m = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) m = std::max(m, std::abs(u[k] - v[k]));
      return m;
    }
    case Kind::lp:
      if (p_ == 1.0) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) s += std::abs(u[k] - v[k]);
        return s;
      }
      if (p_ == 2.0) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
          const double d = u[k] - v[k];
          s += d * d;
        }
        return std::sqrt(s);
      }
      [[fallthrough]];
    case Kind::custom: {
      thread_local Vector diff;
      diff.resize(dim_);
      for (std::size_t k = 0; k < dim_; ++k) diff[k] = u[k] - v[k];
      return norm(diff);
    }
  }
  return 0.0;
}

void NormedSpace::norm_gradient(ConstPoint v, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  const double nv = norm(v);
  if (nv == 0.0) return;
  switch (kind_) {
    case Kind::linf: {
      std::size_t arg = 0;
      for (std::size_t k = 1; k < dim_; ++k)
        if (std::abs(v[k]) > std::abs(v[arg])) arg = k;
      out[arg] = v[arg] > 0 ? 1.0 : -1.0;
      return;
    }
    case Kind::lp:
      for (std::size_t k = 0; k < dim_; ++k) {
        if (v[k] == 0.0) continue;
        const double sign = v[k] > 0 ? 1.0 : -1.0;
        out[k] = p_ == 1.0 ? sign : sign * std::pow(std::abs(v[k]) / nv, p_ - 1.0);
      }
      return;
    case Kind::custom: {
      const double h = 1e-6 * std::max(1.0, nv);
      Vector probe(v.begin(), v.end());
      for (std::size_t k = 0; k < dim_; ++k) {
        const double keep = probe[k];
        probe[k] = keep + h;
        const double up = norm(probe);
        probe[k] = keep - h;
        const double down = norm(probe);
        probe[k] = keep;
        out[k] = (up - down) / (2.0 * h);
      }
      return;
    }
  }
}

// ---------------------------------------------------------------------------

NearestIndex::NearestIndex(NormedSpace space, double cell)
    : space_(std::move(space)),
      cell_(cell),
      use_grid_(space_.exact_box() && space_.dim() <= kMaxGridDim && cell > 0.0 &&
                std::isfinite(cell)),
      points_(space_.dim()) {}

std::size_t NearestIndex::KeyHash::operator()(const CellKey& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto c : k) h = (h ^ static_cast<std::uint64_t>(c)) * 0x100000001b3ULL + (h >> 29);
  return static_cast<std::size_t>(h);
}

NearestIndex::CellKey NearestIndex::cell_of(ConstPoint p) const {
  CellKey key{};
  for (std::size_t k = 0; k < p.size(); ++k)
    key[k] = static_cast<std::int64_t>(std::floor(p[k] / cell_));
  return key;
}

std::size_t NearestIndex::insert(ConstPoint p) {
  const std::size_t idx = points_.size();
  points_.push_back(p);
  if (use_grid_) cells_[cell_of(p)].push_back(idx);
  return idx;
}

template <class Fn>
void NearestIndex::visit_shell(const CellKey& center, std::int64_t radius, Fn&& fn) const {
  const std::size_t d = space_.dim();
  CellKey offset{};
  CellKey probe{};
  for (std::size_t k = 0; k < d; ++k) offset[k] = -radius;
  while (true) {
    std::int64_t cheb = 0;
    for (std::size_t k = 0; k < d; ++k) cheb = std::max(cheb, std::abs(offset[k]));
    if (cheb == radius) {
      for (std::size_t k = 0; k < d; ++k) probe[k] = center[k] + offset[k];
      if (auto it = cells_.find(probe); it != cells_.end())
        for (std::size_t idx : it->second) fn(idx);
    }
    std::size_t k = 0;
    while (k < d && offset[k] == radius) offset[k++] = -radius;
    if (k == d) break;
    ++offset[k];
  }
}

std::optional<std::size_t> NearestIndex::any_within(ConstPoint q, double r) const {
  if (!use_grid_) {
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (space_.distance(q, points_[i]) <= r) return i;
    return std::nullopt;
  }
  const auto center = cell_of(q);
  const auto reach = static_cast<std::int64_t>(std::ceil(r * space_.box_factor() / cell_));
  for (std::int64_t shell = 0; shell <= reach; ++shell) {
    std::optional<std::size_t> found;
    visit_shell(center, shell, [&](std::size_t idx) {
      if (!found && space_.distance(q, points_[idx]) <= r) found = idx;
    });
    if (found) return found;
  }
  return std::nullopt;
}

void NearestIndex::for_each_within(ConstPoint q, double r,
                                   const std::function<void(std::size_t, double)>& fn) const {
  if (!use_grid_) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double dist = space_.distance(q, points_[i]);
      if (dist <= r) fn(i, dist);
    }
    return;
  }
  const auto center = cell_of(q);
  const auto reach = static_cast<std::int64_t>(std::ceil(r * space_.box_factor() / cell_));
  for (std::int64_t shell = 0; shell <= reach; ++shell)
    visit_shell(center, shell, [&](std::size_t idx) {
      const double dist = space_.distance(q, points_[idx]);
      if (dist <= r) fn(idx, dist);
    });
}

std::pair<std::size_t, double> NearestIndex::nearest(ConstPoint q) const {
  if (points_.empty()) throw PreconditionError("nearest: empty index");
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](std::size_t idx) {
    const double dist = space_.distance(q, points_[idx]);
    if (dist < best_dist || (dist == best_dist && idx < best)) {
      best = idx;
      best_dist = dist;
    }
  };
  auto linear = [&] {
    for (std::size_t i = 0; i < points_.size(); ++i) consider(i);
    return std::pair{best, best_dist};
  };
  if (!use_grid_) return linear();

  const auto center = cell_of(q);
  const std::size_t d = space_.dim();
  for (std::int64_t shell = 0;; ++shell) {
    const double cube = std::pow(2.0 * static_cast<double>(shell) + 1.0, static_cast<double>(d));
    if (cube > 4.0 * static_cast<double>(points_.size()) + 64.0) {
      best_dist = std::numeric_limits<double>::infinity();
      return linear();
    }
    visit_shell(center, shell, consider);
    // Anything in a later shell is at least shell * cell away in every metric
    // bounded below by |.|_inf / box_factor.
    const double lower = static_cast<double>(shell) * cell_ / space_.box_factor();
    if (best_dist < lower) return {best, best_dist};
  }
}

// ---------------------------------------------------------------------------

Vector sample_ball(const NormedSpace& space, ConstPoint center, double radius,
                   RandomStream& rng) {
  const std::size_t d = space.dim();
  const double half = space.box_factor() * radius;
  Vector offset(d);
  while (true) {
    for (auto& x : offset) x = rng.uniform(-half, half);
    if (space.norm(offset) <= radius) break;
  }
  for (std::size_t k = 0; k < d; ++k) offset[k] += center[k];
  return offset;
}

namespace {

// Norm distance from c to the box [lo, lo + side]^d, or a lower bound for
// custom norms. `reach` is the largest distance from the box middle to a
// corner, which bounds the distance to every point of the box.
double box_gap(const NormedSpace& space, ConstPoint c, const Vector& lo, double side,
               double reach) {
  const std::size_t d = space.dim();
  Vector off(d);
  Vector mid(d);
  double inf = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double a = lo[k] - c[k];
    const double b = a + side;
    off[k] = a > 0.0 ? a : (b < 0.0 ? b : 0.0);
    inf = std::max(inf, std::abs(off[k]));
    mid[k] = a + 0.5 * side;
  }
  if (space.exact_box()) return space.norm(off);
  return std::max(inf / space.box_factor(), space.norm(mid) - reach);
}

void sweep_cover(const NormedSpace& space, ConstPoint center, double radius, double mesh,
                 NearestIndex& index, const NetOptions& options, std::size_t& inserted) {
  const std::size_t d = space.dim();
  if (d == 0 || d > 4) return;
  const Vector ones(d, 1.0);
  const double h0 = 0.5 * mesh / space.norm(ones);
  const double half = space.box_factor() * radius;
  const auto per_axis = static_cast<std::size_t>(std::ceil(2.0 * half / h0));
  if (std::pow(static_cast<double>(per_axis), static_cast<double>(d)) >
      static_cast<double>(options.max_sweep_cells))
    return;
  const std::size_t corners = std::size_t{1} << d;
  const double strict = mesh * (1.0 - 1e-12);

  struct Cell {
    Vector lo;
    double side;
    int depth;
  };
  std::vector<Cell> stack;
  Vector corner(d);
  Vector mid(d);
  std::vector<std::size_t> near;

  auto reach_of = [&](const Cell& cell) {
    for (std::size_t k = 0; k < d; ++k) mid[k] = cell.lo[k] + 0.5 * cell.side;
    double reach = 0.0;
    for (std::size_t c = 0; c < corners; ++c) {
      for (std::size_t k = 0; k < d; ++k) corner[k] = cell.lo[k] + ((c >> k) & 1U ? cell.side : 0.0);
      reach = std::max(reach, space.distance(corner, mid));
    }
    return reach;
  };

  // Expects `mid` filled by reach_of.
  auto settle = [&](const Cell& cell, double reach) {
    near.clear();
    index.for_each_within(mid, mesh + reach, [&](std::size_t i, double) { near.push_back(i); });
    for (std::size_t i : near) {
      const auto p = index.points()[i];
      bool all = true;
      for (std::size_t c = 0; c < corners && all; ++c) {
        for (std::size_t k = 0; k < d; ++k)
          corner[k] = cell.lo[k] + ((c >> k) & 1U ? cell.side : 0.0);
        all = space.distance(corner, p) <= strict;
      }
      if (all) return true;
    }
    return false;
  };

  auto try_insert = [&](const Vector& q) {
    if (space.distance(q, center) <= radius && !index.any_within(q, mesh)) {
      index.insert(q);
      ++inserted;
    }
  };

  std::vector<std::size_t> idx(d, 0);
  while (true) {
    Cell top{Vector(d), h0, 0};
    for (std::size_t k = 0; k < d; ++k)
      top.lo[k] = center[k] - half + static_cast<double>(idx[k]) * h0;
    stack.push_back(std::move(top));
    while (!stack.empty()) {
      Cell cell = std::move(stack.back());
      stack.pop_back();
      const double reach = reach_of(cell);
      if (box_gap(space, center, cell.lo, cell.side, reach) > radius) continue;
      if (settle(cell, reach)) continue;
      if (cell.depth < options.sweep_depth) {
        const double h = 0.5 * cell.side;
        for (std::size_t c = 0; c < corners; ++c) {
          Cell child{cell.lo, h, cell.depth + 1};
          for (std::size_t k = 0; k < d; ++k)
            if ((c >> k) & 1U) child.lo[k] += h;
          stack.push_back(std::move(child));
        }
        continue;
      }
      Vector q(d);
      for (std::size_t k = 0; k < d; ++k) q[k] = cell.lo[k] + 0.5 * cell.side;
      try_insert(q);
      for (std::size_t c = 0; c < corners; ++c) {
        for (std::size_t k = 0; k < d; ++k) q[k] = cell.lo[k] + ((c >> k) & 1U ? cell.side : 0.0);
        try_insert(q);
      }
    }
    std::size_t k = 0;
    while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == d) break;
  }
}

}  // namespace

Net greedy_net(const NormedSpace& space, ConstPoint center, double radius, double mesh,
               RandomStream& rng, const NetOptions& options) {
  if (!(radius > 0.0) || !(mesh > 0.0))
    throw PreconditionError("greedy_net: radius and mesh must be positive");
  if (center.size() != space.dim()) throw PreconditionError("greedy_net: center dimension");

  Net net;
  net.center.assign(center.begin(), center.end());
  net.radius = radius;
  net.mesh = mesh;

  NearestIndex index(space, mesh * space.box_factor());
  index.insert(center);
  if (mesh < radius) {
    std::size_t run = 0;
    while (run < options.coverage_run) {
      if (net.samples_drawn >= options.max_samples)
        throw BudgetExhausted("greedy_net: sample budget of " +
                              std::to_string(options.max_samples) + " exhausted");
      const Vector s = sample_ball(space, center, radius, rng);
      ++net.samples_drawn;
      if (index.any_within(s, mesh)) {
        ++run;
      } else {
        index.insert(s);
        run = 0;
      }
    }
    if (options.sweep) sweep_cover(space, center, radius, mesh, index, options, net.sweep_inserted);
  }
  net.points = index.points();
  return net;
}

CoverageCheck check_covering(const NormedSpace& space, const Net& net, std::size_t samples,
                             RandomStream& rng) {
  NearestIndex index(space, net.mesh * space.box_factor());
  for (std::size_t i = 0; i < net.points.size(); ++i) index.insert(net.points[i]);
  CoverageCheck out;
  out.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vector p = sample_ball(space, net.center, net.radius, rng);
    const double dist = index.nearest(p).second;
    out.worst_distance = std::max(out.worst_distance, dist);
    if (dist > net.mesh) ++out.uncovered;
  }
  return out;
}

double min_separation(const NormedSpace& space, const PointSet& points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::min(best, space.distance(points[i], points[j]));
  return best;
}

Projection project_to_set(const NormedSpace& space, ConstPoint p, const PointSet& candidates) {
  if (candidates.empty()) throw PreconditionError("project_to_set: empty candidate set");
  Projection out;
  out.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double dist = space.distance(p, candidates[i]);
    if (dist < out.distance) {
      out.distance = dist;
      out.index = i;
    }
  }
  const auto winner = candidates[out.index];
  out.point.assign(winner.begin(), winner.end());
  return out;
}

double identity_distortion(const NormedSpace& a, const NormedSpace& b, std::size_t sample_dirs,
                           RandomStream& rng) {
  if (a.dim() != b.dim()) throw PreconditionError("identity_distortion: dimension mismatch");
  const std::size_t d = a.dim();
  double b_over_a = 0.0;
  double a_over_b = 0.0;
  auto probe = [&](const Vector& v) {
    const double na = a.norm(v);
    const double nb = b.norm(v);
    if (na == 0.0 || nb == 0.0) return;
    b_over_a = std::max(b_over_a, nb / na);
    a_over_b = std::max(a_over_b, na / nb);
  };
  Vector v(d);
  for (std::size_t k = 0; k < d; ++k) {
    std::fill(v.begin(), v.end(), 0.0);
    v[k] = 1.0;
    probe(v);
  }
  if (d <= 12) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      for (std::size_t k = 0; k < d; ++k) v[k] = (mask >> k) & 1U ? -1.0 : 1.0;
      probe(v);
    }
  }
  for (std::size_t s = 0; s < sample_dirs; ++s) {
    for (auto& x : v) x = rng.normal();
    probe(v);
  }
  return std::max(1.0, b_over_a * a_over_b);
}

}  // namespace geomlab
