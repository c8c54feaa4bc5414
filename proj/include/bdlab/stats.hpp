#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace bdlab {

inline constexpr double kDefaultSignificance = 1e-3;

/// Sorted copy of a sample.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);

  [[nodiscard]] std::size_t count() const { return sorted_.size(); }
  [[nodiscard]] std::span<const double> sorted() const { return sorted_; }
  /// Fraction of samples <= x (right-continuous).
  [[nodiscard]] double cdf(double x) const;
  /// Smallest sample s with cdf(s) >= q, q in [0, 1].
  [[nodiscard]] double quantile(double q) const;

 private:
  std::vector<double> sorted_;
};

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  [[nodiscard]] double std_error() const;
};

Moments moments(std::span<const double> x);

double normal_cdf(double x);
/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Limiting Kolmogorov distribution P(K <= x).
double kolmogorov_cdf(double x);
/// c with P(K > c) = significance.
double kolmogorov_critical(double significance);

struct KsResult {
  double statistic = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;  // 0 for one-sample tests
  double significance = kDefaultSignificance;
  double threshold = 0.0;
  bool pass = false;
};

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       double significance = kDefaultSignificance);
KsResult ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf,
                       double significance = kDefaultSignificance);
KsResult ks_one_sample_normal(std::span<const double> a, double significance = kDefaultSignificance);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for a binomial proportion. A zero count uses the
/// exact one-sided bound 1 - (1 - confidence)^(1/n), about 3/n at 95%.
Interval wilson_interval(std::size_t successes, std::size_t n, double confidence);

struct TailPoint {
  double x = 0.0;
  std::size_t n = 0;
  std::size_t upper_count = 0;  // #{X >= x}
  std::size_t lower_count = 0;  // #{X <= -x}
  double p_upper = 0.0;
  double p_lower = 0.0;
  Interval upper_ci;
  Interval lower_ci;
};

std::vector<TailPoint> tail_estimator(std::span<const double> samples, std::span<const double> x_grid,
                                      double confidence = 0.95);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double level = 0.95;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::pair<double, double>> points;  // (log x, log y)
};

/// Replica samples observed at one abscissa; the fitted ordinate is their mean.
struct FitGroup {
  double x = 0.0;
  std::vector<double> samples;
};

/// Least squares on (log x, log mean y). The bootstrap resamples replicas
/// within each group.
ExponentFit loglog_fit(std::span<const FitGroup> groups, std::size_t n_bootstrap = 1000, double level = 0.95,
                       std::uint64_t seed = 0);

/// Same on bare (x, y) points; the bootstrap resamples points.
ExponentFit loglog_fit(std::span<const std::pair<double, double>> points, std::size_t n_bootstrap = 1000,
                       double level = 0.95, std::uint64_t seed = 0);

}  // namespace bdlab
