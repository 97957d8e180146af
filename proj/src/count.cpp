#include "geomlab/count.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "geomlab/error.hpp"
#include "geomlab/parallel.hpp"

namespace geomlab {

BigInt binomial(std::uint64_t a, std::uint64_t b) {
  if (b > a) return 0;
  b = std::min(b, a - b);
  BigInt out = 1;
  for (std::uint64_t k = 1; k <= b; ++k) {
    out *= a - b + k;
    out /= k;
  }
  return out;
}

BigInt factorial(std::uint64_t a) {
  BigInt out = 1;
  for (std::uint64_t k = 2; k <= a; ++k) out *= k;
  return out;
}

double log_of(const BigInt& value) {
  if (value <= 0) throw PreconditionError("log_of: value must be positive");
  const auto top = boost::multiprecision::msb(value);
  if (top < 1000) return std::log(value.convert_to<double>());
  const auto shift = top - 62;
  const BigInt head = value >> shift;
  return std::log(head.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

double log_of(const Rational& value) {
  return log_of(BigInt(boost::multiprecision::numerator(value))) -
         log_of(BigInt(boost::multiprecision::denominator(value)));
}

double to_double(const Rational& value) {
  if (value == 0) return 0.0;
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (boost::multiprecision::msb(abs(num)) < 1000 && boost::multiprecision::msb(den) < 1000)
    return num.convert_to<double>() / den.convert_to<double>();
  const double mag = std::exp(log_of(BigInt(abs(num))) - log_of(den));
  return num < 0 ? -mag : mag;
}

std::string to_string(ConstantMode mode) {
  switch (mode) {
    case ConstantMode::none:
      return "none";
    case ConstantMode::shifted:
      return "shifted";
    case ConstantMode::standard:
      return "standard";
  }
  return "unknown";
}

ConstantMode constant_mode_from_string(const std::string& text) {
  if (text == "none") return ConstantMode::none;
  if (text == "shifted") return ConstantMode::shifted;
  if (text == "standard") return ConstantMode::standard;
  throw PreconditionError("unknown constant mode '" + text + "' (none|shifted|standard)");
}

namespace {

void check_regular_args(std::size_t n, std::size_t degree, const CountGuard& guard,
                        const char* what) {
  if ((n * degree) % 2 != 0)
    throw PreconditionError(std::string(what) + ": n*Delta = " + std::to_string(n * degree) +
                            " is odd");
  if (n > guard.max_n)
    throw BudgetExhausted(std::string(what) + ": n = " + std::to_string(n) +
                          " exceeds the size guard " + std::to_string(guard.max_n));
}

// counts[k - 1] = number of vertices that still need k more edges.
using ClassCounts = std::vector<std::size_t>;

class ClassCounter {
 public:
  explicit ClassCounter(std::size_t degree) : degree_(degree) {}

  BigInt count(const ClassCounts& c) {
    std::size_t top = degree_;
    while (top > 0 && c[top - 1] == 0) --top;
    if (top == 0) return 1;
    if (auto it = memo_.find(c); it != memo_.end()) return it->second;

    ClassCounts rest = c;
    --rest[top - 1];
    std::vector<std::size_t> take(degree_, 0);
    BigInt total = 0;
    distribute(rest, take, 0, top, 1, total);
    memo_.emplace(c, total);
    return total;
  }

 private:
  // Chooses how many of the removed vertex's `need` neighbors come from each
  // residual class, then recurses on the updated class counts.
  void distribute(const ClassCounts& rest, std::vector<std::size_t>& take, std::size_t k,
                  std::size_t need, BigInt ways, BigInt& total) {
    if (k == degree_) {
      if (need != 0) return;
      ClassCounts next(degree_, 0);
      for (std::size_t j = 0; j < degree_; ++j) {
        next[j] += rest[j] - take[j];
        if (j > 0) next[j - 1] += take[j];
      }
      total += ways * count(next);
      return;
    }
    const std::size_t limit = std::min(need, rest[k]);
    for (std::size_t a = 0; a <= limit; ++a) {
      take[k] = a;
      distribute(rest, take, k + 1, need - a, ways * binomial(rest[k], a), total);
    }
    take[k] = 0;
  }

  std::size_t degree_;
  std::map<ClassCounts, BigInt> memo_;
};

// Vertex-by-vertex backtracking: vertex v picks its remaining neighbors among
// later vertices that still have free degree.
class Backtracker {
 public:
  Backtracker(std::size_t n, std::vector<std::size_t> residual,
              const std::function<void(const std::vector<Edge>&)>* visit)
      : n_(n), residual_(std::move(residual)), visit_(visit) {}

  void push(Edge e) { edges_.push_back(e); }

  std::uint64_t run(std::size_t v) {
    leaves_ = 0;
    solve(v);
    return leaves_;
  }

 private:
  void solve(std::size_t v) {
    while (v < n_ && residual_[v] == 0) ++v;
    if (v == n_) {
      ++leaves_;
      if (visit_) (*visit_)(edges_);
      return;
    }
    choose(v, v + 1, residual_[v]);
  }

  void choose(std::size_t v, std::size_t start, std::size_t need) {
    if (need == 0) {
      const std::size_t saved = residual_[v];
      residual_[v] = 0;
      solve(v + 1);
      residual_[v] = saved;
      return;
    }
    for (std::size_t w = start; w + need <= n_; ++w) {
      if (residual_[w] == 0) continue;
      --residual_[w];
      edges_.push_back({static_cast<Vertex>(v), static_cast<Vertex>(w)});
      choose(v, w + 1, need - 1);
      edges_.pop_back();
      ++residual_[w];
    }
  }

  std::size_t n_;
  std::vector<std::size_t> residual_;
  const std::function<void(const std::vector<Edge>&)>* visit_;
  std::vector<Edge> edges_;
  std::uint64_t leaves_ = 0;
};

// All degree-sized neighbor sets of vertex 0, in lexicographic order.
std::vector<std::vector<Vertex>> first_vertex_choices(std::size_t n, std::size_t degree) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> cur;
  std::function<void(Vertex)> rec = [&](Vertex start) {
    if (cur.size() == degree) {
      out.push_back(cur);
      return;
    }
    for (Vertex w = start; w + (degree - cur.size()) <= n; ++w) {
      cur.push_back(w);
      rec(w + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

Backtracker after_first_vertex(std::size_t n, std::size_t degree, const std::vector<Vertex>& nb,
                               const std::function<void(const std::vector<Edge>&)>* visit) {
  std::vector<std::size_t> residual(n, degree);
  residual[0] = 0;
  for (Vertex w : nb) --residual[w];
  Backtracker bt(n, std::move(residual), visit);
  for (Vertex w : nb) bt.push({0, w});
  return bt;
}

}  // namespace

BigInt count_regular_exact(std::size_t n, std::size_t degree, const CountGuard& guard) {
  check_regular_args(n, degree, guard, "count_regular_exact");
  if (degree >= n) return n == 0 ? 1 : 0;
  if (degree == 0) return 1;
  ClassCounter counter(degree);
  ClassCounts start(degree, 0);
  start[degree - 1] = n;
  return counter.count(start);
}

BigInt count_regular_backtrack(std::size_t n, std::size_t degree, const CountGuard& guard) {
  check_regular_args(n, degree, guard, "count_regular_backtrack");
  if (degree >= n) return n == 0 ? 1 : 0;
  if (degree == 0) return 1;
  const auto choices = first_vertex_choices(n, degree);
  std::vector<std::uint64_t> leaves(choices.size(), 0);
  parallel_for(choices.size(), [&](std::size_t k) {
    leaves[k] = after_first_vertex(n, degree, choices[k], nullptr).run(1);
  });
  BigInt total = 0;
  for (auto c : leaves) total += c;
  return total;
}

void enumerate_regular_graphs(std::size_t n, std::size_t degree,
                              const std::function<void(const Graph&)>& visit,
                              const CountGuard& guard) {
  check_regular_args(n, degree, guard, "enumerate_regular_graphs");
  if (degree >= n) {
    if (n == 0) visit(Graph(0));
    return;
  }
  const std::function<void(const std::vector<Edge>&)> leaf = [&](const std::vector<Edge>& e) {
    visit(Graph(n, e));
  };
  if (degree == 0) {
    visit(Graph(n));
    return;
  }
  for (const auto& nb : first_vertex_choices(n, degree)) after_first_vertex(n, degree, nb, &leaf).run(1);
}

CountResult count_regular_formula(std::size_t n, std::size_t degree, ConstantMode mode) {
  if ((n * degree) % 2 != 0)
    throw PreconditionError("count_regular_formula: n*Delta = " + std::to_string(n * degree) +
                            " is odd");
  const double dn = static_cast<double>(n * degree);
  const double dd = static_cast<double>(degree);
  double value = std::lgamma(dn + 1.0) - std::lgamma(dn / 2.0 + 1.0) -
                 (dn / 2.0) * std::numbers::ln2 - static_cast<double>(n) * std::lgamma(dd + 1.0);
  if (mode == ConstantMode::shifted) value += 1.0 - dd * dd / 4.0;
  if (mode == ConstantMode::standard) value += (1.0 - dd * dd) / 4.0;
  CountResult out;
  out.log_value = value;
  out.approx = std::exp(value);
  out.mode = to_string(mode);
  return out;
}

CountResult count_regular_result(std::size_t n, std::size_t degree, const CountGuard& guard) {
  CountResult out;
  out.exact = count_regular_exact(n, degree, guard);
  out.mode = "exact";
  if (*out.exact > 0) {
    out.log_value = log_of(*out.exact);
    out.approx = std::exp(out.log_value);
  } else {
    out.log_value = -std::numeric_limits<double>::infinity();
  }
  return out;
}

Rational hypergeometric_avoid_probability(std::uint64_t population, std::uint64_t draws,
                                          std::uint64_t marked) {
  if (marked > population)
    throw PreconditionError("hypergeometric: marked " + std::to_string(marked) +
                            " exceeds population " + std::to_string(population));
  if (draws > population)
    throw PreconditionError("hypergeometric: draws " + std::to_string(draws) +
                            " exceed population " + std::to_string(population));
  if (draws > population - marked) return 0;
  return Rational(binomial(population - marked, draws), binomial(population, draws));
}

Rational prob_disjoint_exact(std::size_t n, std::size_t degree, std::uint64_t marked) {
  if ((n * degree) % 2 != 0)
    throw PreconditionError("prob_disjoint_exact: n*Delta = " + std::to_string(n * degree) +
                            " is odd");
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - (n > 0 ? 1 : 0)) / 2;
  return hypergeometric_avoid_probability(pairs, n * degree / 2, marked);
}

ExponentBound prob_disjoint_exponent_bound(std::size_t n, std::size_t degree, double eps) {
  if (n < 2) throw PreconditionError("prob_disjoint_exponent_bound: need n >= 2");
  const double nn = static_cast<double>(n);
  const double nd = nn * static_cast<double>(degree);
  const double logn = std::log(nn);
  ExponentBound out;
  out.explicit_bound = (nd / 2.0) * (1.0 + (1.0 + eps) * logn - std::log(nn * (nn - 1.0) / 2.0));
  out.leading = -((1.0 - eps) / 2.0) * nd * logn;
  return out;
}

Rational contiguity_prob_exact(std::size_t n, std::size_t degree, const CountGuard& guard) {
  const BigInt count = count_regular_exact(n, degree, guard);
  const std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n - (n > 0 ? 1 : 0)) / 2;
  return Rational(count, binomial(pairs, n * degree / 2));
}

}  // namespace geomlab
