#include "geomlab/obstruct.hpp"

#include <cmath>
#include <limits>

#include "geomlab/error.hpp"
#include "geomlab/parallel.hpp"

namespace geomlab {

namespace {

double power(double d, double p) { return p == 1.0 ? d : std::pow(d, p); }

// (n/(2(Delta+1)))^{1/d}
double volume_root(std::size_t n, std::size_t degree, std::size_t dim) {
  return std::pow(static_cast<double>(n) / (2.0 * static_cast<double>(degree + 1)),
                  1.0 / static_cast<double>(dim));
}

bool volume_precondition(std::size_t n, std::size_t degree, std::size_t dim) {
  // n >= 2^{d+1}(Delta+1), evaluated without overflow.
  if (dim + 1 >= 64) return false;
  const long double need = std::ldexp(static_cast<long double>(degree + 1), static_cast<int>(dim + 1));
  return static_cast<long double>(n) >= need;
}

}  // namespace

double mean_pairwise_distance(const NormedSpace& space, const PointTuple& x, double p) {
  const std::size_t n = x.size();
  if (n == 0) return 0.0;
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> terms;
    terms.reserve(n - i);
    for (std::size_t j = i + 1; j < n; ++j) terms.push_back(power(space.distance(x[i], x[j]), p));
    rows[i] = 2.0 * pairwise_sum(terms);
  });
  const double nn = static_cast<double>(n);
  return pairwise_sum(rows) / (nn * nn);
}

double poincare_ratio(const Graph& g, const NormedSpace& space, const PointTuple& x, double p) {
  if (p < 1.0) throw PreconditionError("poincare_ratio: need p >= 1");
  const auto degree = g.regular_degree();
  if (!degree) throw PreconditionError("poincare_ratio: graph is not regular");
  if (x.size() != g.order())
    throw PreconditionError("poincare_ratio: tuple has " + std::to_string(x.size()) +
                            " points, graph has " + std::to_string(g.order()) + " vertices");
  std::vector<double> edge_terms;
  edge_terms.reserve(g.edge_count());
  for (const auto& e : g.edges()) edge_terms.push_back(power(space.distance(x[e.u], x[e.v]), p));
  const double nn = static_cast<double>(g.order());
  const double edge_mean =
      2.0 * pairwise_sum(edge_terms) / (static_cast<double>(*degree) * nn);
  if (!(edge_mean > 0.0))
    throw PreconditionError("poincare_ratio: every edge has coincident endpoints");
  return mean_pairwise_distance(space, x, p) / edge_mean;
}

AverageDistanceBound avg_distance_lower_bound(std::size_t n, std::size_t degree, std::size_t dim) {
  if (dim == 0) throw PreconditionError("avg_distance_lower_bound: need d >= 1");
  return {0.25 * volume_root(n, degree, dim), volume_precondition(n, degree, dim)};
}

std::string to_string(Verdict v) {
  return v == Verdict::certified_nonembeddable ? "certified-nonembeddable" : "inconclusive";
}

Certificate nonembedding_certificate(std::size_t n, std::size_t dim, std::size_t degree,
                                     double gamma_upper) {
  if (dim == 0) throw PreconditionError("nonembedding_certificate: need d >= 1");
  Certificate out;
  out.threshold = 0.5 * volume_root(n, degree, dim);
  if (!volume_precondition(n, degree, dim)) {
    out.reason = "n < 2^(d+1)(Delta+1)";
    return out;
  }
  if (gamma_upper <= out.threshold) {
    out.verdict = Verdict::certified_nonembeddable;
    out.reason = "gamma upper bound <= volumetric threshold";
  } else {
    out.reason = "gamma upper bound > volumetric threshold";
  }
  return out;
}

double naor_gamma_upper(std::size_t dim, double gap, double c_naor) {
  if (dim == 0) throw PreconditionError("naor_gamma_upper: need d >= 1");
  if (!(gap > 0.0)) throw PreconditionError("naor_gamma_upper: spectral gap must be positive");
  if (!(c_naor > 0.0)) throw PreconditionError("naor_gamma_upper: C_naor must be positive");
  return c_naor * std::log(static_cast<double>(dim) + 1.0) / gap;
}

std::size_t dimension_threshold(std::size_t n, std::size_t degree, double gap, double c_naor) {
  if (!(gap > 0.0)) throw PreconditionError("dimension_threshold: spectral gap must be positive");
  std::size_t best = 0;
  for (std::size_t d = 1; volume_precondition(n, degree, d); ++d)
    if (naor_gamma_upper(d, gap, c_naor) <= 0.5 * volume_root(n, degree, d)) best = d;
  return best;
}

ObstructionReport certify(const Graph& g, const NormedSpace& space, double c_naor,
                          const PointTuple* witness, double p) {
  const auto spectral = second_eigenvalue(g);
  ObstructionReport out;
  out.n = g.order();
  out.degree = spectral.degree;
  out.dim = space.dim();
  out.space_label = space.label();
  out.p = p;
  out.c_naor = c_naor;
  out.lambda2 = spectral.lambda2;
  out.gap = spectral.gap;
  out.dimension_threshold = out.gap > 0.0 ? dimension_threshold(out.n, out.degree, out.gap, c_naor) : 0;
  const auto vol = avg_distance_lower_bound(out.n, out.degree, out.dim);
  out.vol_threshold = vol.value;
  out.vol_certifying = vol.certifying;
  if (out.gap > 0.0) {
    out.gamma_upper = naor_gamma_upper(out.dim, out.gap, c_naor);
    out.certificate = nonembedding_certificate(out.n, out.dim, out.degree, out.gamma_upper);
  } else {
    out.gamma_upper = std::numeric_limits<double>::infinity();
    out.certificate.threshold = 0.5 * volume_root(out.n, out.degree, out.dim);
    out.certificate.reason = "spectral gap is not positive";
  }
  if (witness) {
    out.gamma_lower = poincare_ratio(g, space, *witness, p);
    out.mean_pairwise = mean_pairwise_distance(space, *witness, p);
    if (*out.gamma_lower > out.gamma_upper) {
      out.consistency_violation = true;
      out.certificate.verdict = Verdict::inconclusive;
      out.certificate.reason = "witness Poincare ratio exceeds the upper bound; C_naor too small";
    }
  }
  return out;
}

}  // namespace geomlab
