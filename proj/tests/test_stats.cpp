#include <cmath>
#include <vector>

#include "bdlab/ext_int.hpp"
#include "bdlab/rng.hpp"
#include "bdlab/stats.hpp"
#include "doctest.h"

using namespace bdlab;

namespace {

std::vector<double> normals(std::uint64_t seed, std::size_t n, double shift = 0.0) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal() + shift;
  return v;
}

}  // namespace

TEST_CASE("Kolmogorov critical values") {
  // tabulated asymptotic values
  CHECK(kolmogorov_critical(0.05) == doctest::Approx(1.3581).epsilon(1e-4));
  CHECK(kolmogorov_critical(0.01) == doctest::Approx(1.6276).epsilon(1e-4));
  CHECK(kolmogorov_critical(1e-3) == doctest::Approx(1.9495).epsilon(1e-4));
  // both series branches agree near the switch point
  CHECK(kolmogorov_cdf(0.2999999) == doctest::Approx(kolmogorov_cdf(0.3000001)).epsilon(1e-6));
}

TEST_CASE("ECDF") {
  Ecdf e({3.0, 1.0, 2.0, 2.0});
  CHECK(e.count() == 4);
  CHECK(e.cdf(0.5) == 0.0);
  CHECK(e.cdf(2.0) == 0.75);
  CHECK(e.cdf(3.0) == 1.0);
  CHECK(e.quantile(0.0) == 1.0);
  CHECK(e.quantile(0.5) == 2.0);
  CHECK(e.quantile(1.0) == 3.0);
  CHECK_THROWS_AS(e.quantile(1.5), UsageError);
}

TEST_CASE("two-sample KS basics") {
  const std::vector<double> a{0.0}, b{1.0};
  CHECK(ks_two_sample(a, b).statistic == 1.0);
  const auto x = normals(1, 500);
  CHECK(ks_two_sample(x, x).statistic == 0.0);
  CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, x), UsageError);

  const auto y = normals(2, 700);
  const auto r1 = ks_two_sample(x, y), r2 = ks_two_sample(y, x);
  CHECK(r1.statistic == r2.statistic);
  // invariant under a common strictly increasing map
  std::vector<double> ex(x), ey(y);
  for (auto& v : ex) v = std::exp(v);
  for (auto& v : ey) v = std::exp(v);
  CHECK(ks_two_sample(ex, ey).statistic == r1.statistic);
  CHECK(r1.pass == (r1.statistic < r1.threshold));
}

TEST_CASE("two-sample KS calibration at significance 1e-3") {
  int passes = 0;
  const int meta = 200;
  for (int m = 0; m < meta; ++m)
    passes += ks_two_sample(normals(1000 + 2 * m, 10000), normals(1001 + 2 * m, 10000)).pass;
  CHECK(passes >= meta * 99 / 100);
}

TEST_CASE("one-sample normal KS") {
  CHECK(ks_one_sample_normal(std::vector<double>{0.0}).statistic == doctest::Approx(0.5));
  CHECK(ks_one_sample_normal(normals(5, 100000)).pass);
  CHECK_FALSE(ks_one_sample_normal(normals(6, 10000, 0.5)).pass);
  CHECK_THROWS_AS(ks_one_sample_normal(std::vector<double>{}), UsageError);
}

TEST_CASE("Wilson intervals and tails") {
  const std::vector<double> zeros(1000, 0.0);
  const std::vector<double> grid{1.0};
  const auto t = tail_estimator(zeros, grid);
  CHECK(t[0].p_upper == 0.0);
  CHECK(t[0].p_lower == 0.0);
  CHECK(t[0].upper_ci.hi == doctest::Approx(3.0 / 1000).epsilon(0.01));

  const std::vector<double> sym{-3, -2, -1, 0, 1, 2, 3};
  const std::vector<double> g2{1.0, 2.0, 2.5};
  for (const auto& p : tail_estimator(sym, g2)) CHECK(p.upper_count == p.lower_count);

  const auto z = normals(9, 1000000);
  const std::vector<double> g3{2.0, 4.0};
  const auto tn = tail_estimator(z, g3);
  const double p2 = 0.5 * std::erfc(2.0 / std::sqrt(2.0));
  CHECK(tn[0].upper_ci.lo <= p2);
  CHECK(p2 <= tn[0].upper_ci.hi);
  const double p4 = 0.5 * std::erfc(4.0 / std::sqrt(2.0));
  const auto w4 = wilson_interval(tn[1].upper_count, tn[1].n, 0.999);
  CHECK(w4.lo <= p4);
  CHECK(p4 <= w4.hi);

  const auto w = wilson_interval(50, 100, 0.95);
  CHECK(w.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(w.hi == doctest::Approx(0.5962).epsilon(1e-3));
}

TEST_CASE("log-log fits") {
  std::vector<std::pair<double, double>> exact;
  for (double x : {8.0, 16.0, 32.0, 64.0}) exact.emplace_back(x, std::pow(x, 2.0 / 3.0));
  const auto f = loglog_fit(exact);
  CHECK(std::fabs(f.slope - 2.0 / 3.0) < 1e-12);
  CHECK(f.lo <= f.slope);
  CHECK(f.slope <= f.hi);

  std::vector<std::pair<double, double>> scaled(exact);
  for (auto& p : scaled) p.second *= 7.5;
  const auto fs = loglog_fit(scaled);
  CHECK(std::fabs(fs.slope - f.slope) < 1e-12);
  CHECK(fs.intercept == doctest::Approx(f.intercept + std::log(7.5)));

  std::vector<std::pair<double, double>> flat;
  for (double x : {1.0, 2.0, 5.0}) flat.emplace_back(x, 4.0);
  CHECK(std::fabs(loglog_fit(flat).slope) < 1e-12);

  CHECK_THROWS_AS(loglog_fit(std::vector<std::pair<double, double>>{{1, 1}, {2, 0}, {3, 1}}), UsageError);
  CHECK_THROWS_AS(loglog_fit(std::vector<std::pair<double, double>>{{1, 1}, {2, 1}, {2, 1}}), UsageError);
}

TEST_CASE("noisy power law calibration") {
  Rng rng(44);
  int inside = 0;
  const int meta = 200;
  for (int m = 0; m < meta; ++m) {
    std::vector<std::pair<double, double>> pts;
    for (double x : {8.0, 16.0, 32.0, 64.0}) pts.emplace_back(x, std::pow(x, 2.0 / 3.0) * (1.0 + 0.1 * (rng.uniform() - 0.5)));
    const double s = loglog_fit(pts, 0).slope;
    inside += s >= 0.6 && s <= 0.74;
  }
  CHECK(inside >= meta * 95 / 100);
}

TEST_CASE("replica-level bootstrap") {
  Rng rng(45);
  std::vector<FitGroup> groups;
  for (double x : {8.0, 16.0, 32.0, 64.0}) {
    FitGroup g{x, {}};
    for (int i = 0; i < 200; ++i) g.samples.push_back(std::pow(x, 2.0 / 3.0) * (1.0 + 0.3 * rng.normal()));
    groups.push_back(g);
  }
  const auto f = loglog_fit(groups, 1000, 0.95, 3);
  CHECK(f.lo <= f.slope);
  CHECK(f.slope <= f.hi);
  CHECK(f.hi - f.lo < 0.1);
  CHECK(f.lo < 2.0 / 3.0);
  CHECK(2.0 / 3.0 < f.hi);
  const auto again = loglog_fit(groups, 1000, 0.95, 3);
  CHECK(again.lo == f.lo);
  CHECK(again.hi == f.hi);
}
