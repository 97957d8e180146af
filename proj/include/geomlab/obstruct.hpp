#pragma once

// Non-embedding certificates: Poincare ratios, the volumetric lower bound on
// average distances and the spectral upper bound on the Poincare constant.

#include <cstddef>
#include <optional>
#include <string>

#include "geomlab/geom.hpp"

namespace geomlab {

/// [(1/n^2) sum_{i,j} d(x_i,x_j)^p] / [(1/(Delta n)) sum_{i~j ordered} d(x_i,x_j)^p].
/// Any tuple gives a lower bound on the Poincare constant of G. Throws on a
/// non-regular graph, size mismatch or a zero denominator.
double poincare_ratio(const Graph& g, const NormedSpace& space, const PointTuple& x,
                      double p = 1.0);

/// (1/n^2) sum over all ordered pairs (diagonal included) of d(x_i,x_j)^p.
double mean_pairwise_distance(const NormedSpace& space, const PointTuple& x, double p = 1.0);

struct AverageDistanceBound {
  /// (1/4) (n / (2(Delta+1)))^{1/d}.
  double value = 0.0;
  /// Whether n >= 2^{d+1} (Delta+1), under which the bound is proved.
  bool certifying = false;
};

AverageDistanceBound avg_distance_lower_bound(std::size_t n, std::size_t degree, std::size_t dim);

enum class Verdict { certified_nonembeddable, inconclusive };
std::string to_string(Verdict v);

struct Certificate {
  Verdict verdict = Verdict::inconclusive;
  /// (1/2) (n / (2(Delta+1)))^{1/d}.
  double threshold = 0.0;
  std::string reason;
};

/// Certified iff n >= 2^{d+1}(Delta+1) and gamma_upper <= threshold.
Certificate nonembedding_certificate(std::size_t n, std::size_t dim, std::size_t degree,
                                     double gamma_upper);

/// C_naor log(d+1) / gap. Throws on gap <= 0, d == 0 or C_naor <= 0.
double naor_gamma_upper(std::size_t dim, double gap, double c_naor);

/// Largest d such that naor_gamma_upper(d) <= (1/2)(n/(2(Delta+1)))^{1/d}
/// and n >= 2^{d+1}(Delta+1), scanning d upward; 0 if none.
std::size_t dimension_threshold(std::size_t n, std::size_t degree, double gap, double c_naor);

inline constexpr double kDefaultNaorConstant = 16.0;

struct ObstructionReport {
  std::size_t n = 0;
  std::size_t degree = 0;
  std::size_t dim = 0;
  std::string space_label;
  double p = 1.0;
  double c_naor = kDefaultNaorConstant;
  double lambda2 = 0.0;
  double gap = 0.0;
  double gamma_upper = 0.0;
  /// Largest Poincare ratio over the supplied witness tuples, if any.
  std::optional<double> gamma_lower;
  double vol_threshold = 0.0;
  bool vol_certifying = false;
  std::optional<double> mean_pairwise;
  Certificate certificate;
  /// A witness ratio above the spectral upper bound: C_naor is too small.
  bool consistency_violation = false;
  std::size_t dimension_threshold = 0;
};

/// Assembles the certificate for G in `space`: spectral gap, Naor upper
/// bound, volumetric threshold, and optional witness tuple. When the witness
/// ratio exceeds the upper bound the verdict is forced to inconclusive and
/// the violation is flagged.
ObstructionReport certify(const Graph& g, const NormedSpace& space, double c_naor,
                          const PointTuple* witness = nullptr, double p = 1.0);

}  // namespace geomlab
