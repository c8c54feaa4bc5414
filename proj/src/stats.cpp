#include "bdlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "bdlab/ext_int.hpp"
#include "bdlab/rng.hpp"

namespace bdlab {

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::cdf(double x) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double Ecdf::quantile(double q) const {
  if (sorted_.empty()) throw UsageError("Ecdf: quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw UsageError("Ecdf: quantile level outside [0,1]");
  const auto n = static_cast<double>(sorted_.size());
  auto idx = static_cast<std::size_t>(std::ceil(q * n));
  idx = idx == 0 ? 0 : idx - 1;
  return sorted_[std::min(idx, sorted_.size() - 1)];
}

double Moments::std_error() const { return n > 0 ? std::sqrt(variance / static_cast<double>(n)) : 0.0; }

Moments moments(std::span<const double> x) {
  Moments m;
  m.n = x.size();
  if (x.empty()) return m;
  // Welford
  double mean = 0.0, m2 = 0.0;
  std::size_t i = 0;
  for (double v : x) {
    ++i;
    const double d = v - mean;
    mean += d / static_cast<double>(i);
    m2 += d * (v - mean);
  }
  m.mean = mean;
  m.variance = x.size() > 1 ? m2 / static_cast<double>(x.size() - 1) : 0.0;
  return m;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw UsageError("normal_quantile: p must lie in (0,1)");
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x < 0.3) {
    // theta-function form converges fast for small x
    const double a = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double s = 0.0;
    for (int j = 1; j < 50; j += 2) s += std::exp(-a * j * j);
    return std::sqrt(2.0 * std::numbers::pi) / x * s;
  }
  double s = 0.0;
  for (int j = 1; j < 200; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    s += (j % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return 1.0 - 2.0 * s;
}

double kolmogorov_critical(double significance) {
  if (!(significance > 0.0 && significance < 1.0)) throw UsageError("kolmogorov_critical: significance in (0,1)");
  double lo = 0.05, hi = 10.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (1.0 - kolmogorov_cdf(mid) > significance ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

KsResult finish(double stat, std::size_t n1, std::size_t n2, double significance) {
  KsResult r;
  r.statistic = stat;
  r.n1 = n1;
  r.n2 = n2;
  r.significance = significance;
  const double c = kolmogorov_critical(significance);
  const auto a = static_cast<double>(n1);
  const auto b = static_cast<double>(n2);
  r.threshold = n2 == 0 ? c / std::sqrt(a) : c * std::sqrt((a + b) / (a * b));
  r.pass = r.statistic < r.threshold;
  return r;
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double significance) {
  if (a.empty() || b.empty()) throw UsageError("ks_two_sample: both samples must be nonempty");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto n1 = static_cast<double>(x.size());
  const auto n2 = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  return finish(d, x.size(), y.size(), significance);
}

KsResult ks_one_sample(std::span<const double> a, const std::function<double(double)>& cdf, double significance) {
  if (a.empty()) throw UsageError("ks_one_sample: sample must be nonempty");
  std::vector<double> x(a.begin(), a.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size();) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double f = cdf(x[i]);
    d = std::max({d, std::fabs(f - static_cast<double>(i) / n), std::fabs(static_cast<double>(j) / n - f)});
    i = j;
  }
  return finish(d, x.size(), 0, significance);
}

KsResult ks_one_sample_normal(std::span<const double> a, double significance) {
  return ks_one_sample(a, normal_cdf, significance);
}

Interval wilson_interval(std::size_t successes, std::size_t n, double confidence) {
  if (n == 0) throw UsageError("wilson_interval: n must be positive");
  if (successes > n) throw UsageError("wilson_interval: more successes than trials");
  if (!(confidence > 0.0 && confidence < 1.0)) throw UsageError("wilson_interval: confidence in (0,1)");
  const auto nn = static_cast<double>(n);
  if (successes == 0) return {0.0, 1.0 - std::pow(1.0 - confidence, 1.0 / nn)};
  const double z = normal_quantile(0.5 + 0.5 * confidence);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<TailPoint> tail_estimator(std::span<const double> samples, std::span<const double> x_grid,
                                      double confidence) {
  if (samples.empty()) throw UsageError("tail_estimator: empty sample");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  std::vector<TailPoint> out;
  for (double x : x_grid) {
    TailPoint tp;
    tp.x = x;
    tp.n = s.size();
    tp.upper_count = static_cast<std::size_t>(s.end() - std::lower_bound(s.begin(), s.end(), x));
    tp.lower_count = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), -x) - s.begin());
    tp.p_upper = static_cast<double>(tp.upper_count) / static_cast<double>(tp.n);
    tp.p_lower = static_cast<double>(tp.lower_count) / static_cast<double>(tp.n);
    tp.upper_ci = wilson_interval(tp.upper_count, tp.n, confidence);
    tp.lower_ci = wilson_interval(tp.lower_count, tp.n, confidence);
    out.push_back(tp);
  }
  return out;
}

namespace {

std::pair<double, double> least_squares(std::span<const std::pair<double, double>> pts) {
  double sx = 0, sy = 0;
  for (auto [x, y] : pts) sx += x, sy += y;
  const auto n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my);
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double log_positive(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("loglog_fit: values must be finite and positive");
  return std::log(v);
}

void percentile_ci(ExponentFit& fit, std::vector<double>& slopes) {
  if (slopes.empty()) {
    fit.lo = fit.hi = fit.slope;
    return;
  }
  std::sort(slopes.begin(), slopes.end());
  const double a = 0.5 * (1.0 - fit.level);
  auto pick = [&](double q) {
    const double pos = q * static_cast<double>(slopes.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const auto j = std::min(i + 1, slopes.size() - 1);
    return slopes[i] + (pos - static_cast<double>(i)) * (slopes[j] - slopes[i]);
  };
  // the interval always covers the point estimate
  fit.lo = std::min(pick(a), fit.slope);
  fit.hi = std::max(pick(1.0 - a), fit.slope);
}

std::size_t distinct_x(std::span<const std::pair<double, double>> pts) {
  std::set<double> xs;
  for (auto [x, y] : pts) xs.insert(x);
  return xs.size();
}

}  // namespace

ExponentFit loglog_fit(std::span<const FitGroup> groups, std::size_t n_bootstrap, double level, std::uint64_t seed) {
  if (!(level > 0.0 && level < 1.0)) throw UsageError("loglog_fit: level in (0,1)");
  ExponentFit fit;
  fit.level = level;
  for (const auto& g : groups) {
    if (g.samples.empty()) throw UsageError("loglog_fit: empty group");
    fit.points.emplace_back(log_positive(g.x), log_positive(moments(g.samples).mean));
  }
  if (distinct_x(fit.points) < 3) throw UsageError("loglog_fit: need at least 3 distinct x values");
  std::tie(fit.slope, fit.intercept) = least_squares(fit.points);

  Rng rng(seed);
  std::vector<double> slopes;
  slopes.reserve(n_bootstrap);
  std::vector<std::pair<double, double>> pts(groups.size());
  for (std::size_t b = 0; b < n_bootstrap; ++b) {
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& s = groups[gi].samples;
      double sum = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) sum += s[rng.below(static_cast<std::uint32_t>(s.size()))];
      const double m = sum / static_cast<double>(s.size());
      if (!(m > 0.0)) throw UsageError("loglog_fit: bootstrap mean not positive");
      pts[gi] = {fit.points[gi].first, std::log(m)};
    }
    slopes.push_back(least_squares(pts).first);
  }
  percentile_ci(fit, slopes);
  return fit;
}

ExponentFit loglog_fit(std::span<const std::pair<double, double>> points, std::size_t n_bootstrap, double level,
                       std::uint64_t seed) {
  if (!(level > 0.0 && level < 1.0)) throw UsageError("loglog_fit: level in (0,1)");
  ExponentFit fit;
  fit.level = level;
  for (auto [x, y] : points) fit.points.emplace_back(log_positive(x), log_positive(y));
  if (distinct_x(fit.points) < 3) throw UsageError("loglog_fit: need at least 3 distinct x values");
  std::tie(fit.slope, fit.intercept) = least_squares(fit.points);

  Rng rng(seed);
  std::vector<double> slopes;
  std::vector<std::pair<double, double>> pts(fit.points.size());
  for (std::size_t b = 0; b < n_bootstrap; ++b) {
    for (auto& p : pts) p = fit.points[rng.below(static_cast<std::uint32_t>(fit.points.size()))];
    if (distinct_x(pts) < 2) continue;
    slopes.push_back(least_squares(pts).first);
  }
  percentile_ci(fit, slopes);
  return fit;
}

}  // namespace bdlab
