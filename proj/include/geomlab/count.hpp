#pragma once

// Exact and asymptotic counting of labeled regular graphs, hypergeometric
// avoidance probabilities and the contiguity change of measure.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "geomlab/graphs.hpp"

namespace geomlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// C(a, b); zero when b > a.
BigInt binomial(std::uint64_t a, std::uint64_t b);
BigInt factorial(std::uint64_t a);

/// Natural logarithm of a positive big integer / rational, accurate to double
/// precision at any size.
double log_of(const BigInt& value);
double log_of(const Rational& value);
double to_double(const Rational& value);

enum class ConstantMode { none, shifted, standard };
std::string to_string(ConstantMode mode);
ConstantMode constant_mode_from_string(const std::string& text);

struct CountResult {
  std::optional<BigInt> exact;
  double approx = 0.0;
  double log_value = 0.0;
  std::string mode;
};

struct CountGuard {
  /// Largest n accepted by the exact counters.
  std::size_t max_n = 12;
};

/// |G_{n,Delta}|, the number of labeled Delta-regular simple graphs on n
/// vertices. Memoized recursion over residual-degree class counts: the
/// count only depends on how many vertices still need k more edges, so
/// symmetric branches of the backtracking are merged. Throws
/// PreconditionError on odd n*Delta and BudgetExhausted when n exceeds the
/// guard.
BigInt count_regular_exact(std::size_t n, std::size_t degree, const CountGuard& guard = {});

/// Same count by explicit backtracking over neighbor sets, vertex by vertex.
/// Independent of count_regular_exact; parallelized over the neighbor
/// choices of vertex 0.
BigInt count_regular_backtrack(std::size_t n, std::size_t degree, const CountGuard& guard = {});

/// Calls visit(g) for every labeled Delta-regular graph, in lexicographic
/// order of edge sets.
void enumerate_regular_graphs(std::size_t n, std::size_t degree,
                              const std::function<void(const Graph&)>& visit,
                              const CountGuard& guard = {});

/// prefactor * (Delta n)! / ((Delta n / 2)! 2^{Delta n / 2} (Delta!)^n), in
/// log scale. Prefactor e^{1 - Delta^2/4} (shifted), e^{(1 - Delta^2)/4}
/// (standard) or 1 (none).
CountResult count_regular_formula(std::size_t n, std::size_t degree,
                                  ConstantMode mode = ConstantMode::standard);

/// count_regular_exact packaged as a CountResult.
CountResult count_regular_result(std::size_t n, std::size_t degree, const CountGuard& guard = {});

/// C(T - L, m) / C(T, m): probability that a uniform m-subset of a T-set
/// avoids L marked elements.
Rational hypergeometric_avoid_probability(std::uint64_t population, std::uint64_t draws,
                                          std::uint64_t marked);

/// Probability that a uniform graph with n Delta / 2 edges on n vertices
/// avoids `marked` given pairs. Population n(n-1)/2.
Rational prob_disjoint_exact(std::size_t n, std::size_t degree, std::uint64_t marked);

struct ExponentBound {
  /// (n Delta / 2) log(e n^{1+eps} / (n(n-1)/2)).
  double explicit_bound = 0.0;
  /// -((1 - eps)/2) n Delta log n.
  double leading = 0.0;
};

/// Calibrated constant K with explicit_bound <= leading + K n Delta for
/// n >= 50, Delta >= 1, eps in [0, 1).
inline constexpr double kExponentSlack = 0.857;

ExponentBound prob_disjoint_exponent_bound(std::size_t n, std::size_t degree, double eps);

/// |G_{n,Delta}| / C(n(n-1)/2, n Delta / 2).
Rational contiguity_prob_exact(std::size_t n, std::size_t degree, const CountGuard& guard = {});

}  // namespace geomlab
