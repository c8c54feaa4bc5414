#include <cmath>
#include <set>
#include <vector>

#include "bdlab/rng.hpp"
#include "bdlab/stats.hpp"
#include "doctest.h"

using namespace bdlab;

TEST_CASE("streams are reproducible and keyed") {
  const StreamKey k{1, 2, 3, 4};
  Rng a(k), b(k), c(k.with_column(5)), d(k.with_replica(4));
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
  }
  std::set<std::uint64_t> digests;
  for (std::uint64_t r = 0; r < 1000; ++r)
    for (std::uint64_t col = 1; col <= 10; ++col) digests.insert(stream_digest({0, 0, r, col}));
  CHECK(digests.size() == 10000);
  CHECK(stream_digest(k.aux(0)) != stream_digest(k));
}

TEST_CASE("uniform draws") {
  Rng rng(1);
  double s = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    s += u;
  }
  CHECK(std::fabs(s / 100000 - 0.5) < 0.005);
  std::vector<int> hist(7);
  for (int i = 0; i < 70000; ++i) ++hist[rng.below(7)];
  for (int h : hist) CHECK(std::fabs(h - 10000) < 500);
}

TEST_CASE("ziggurat normal") {
  Rng rng(2);
  std::vector<double> x(200000);
  for (auto& v : x) v = rng.normal();
  CHECK(ks_one_sample_normal(x).pass);
  const auto m = moments(x);
  CHECK(std::fabs(m.mean) < 0.01);
  CHECK(std::fabs(m.variance - 1.0) < 0.015);

  // tail beyond the base layer
  std::size_t far = 0;
  const std::size_t n = 4000000;
  for (std::size_t i = 0; i < n; ++i) far += std::fabs(rng.normal()) > 3.7;
  const double p = std::erfc(3.7 / std::sqrt(2.0));
  const auto w = wilson_interval(far, n, 0.999);
  CHECK(w.lo <= p);
  CHECK(p <= w.hi);
}

TEST_CASE("ziggurat exponential") {
  Rng rng(3);
  std::vector<double> x(200000);
  for (auto& v : x) v = rng.exponential();
  CHECK(ks_one_sample(x, [](double v) { return v <= 0 ? 0.0 : 1.0 - std::exp(-v); }).pass);
  std::size_t far = 0;
  const std::size_t n = 2000000;
  for (std::size_t i = 0; i < n; ++i) far += rng.exponential() > 8.0;
  const auto w = wilson_interval(far, n, 0.999);
  CHECK(w.lo <= std::exp(-8.0));
  CHECK(std::exp(-8.0) <= w.hi);
}

TEST_CASE("gamma and Poisson moments") {
  Rng rng(4);
  for (double shape : {0.4, 1.0, 2.5, 30.0}) {
    std::vector<double> x(100000);
    for (auto& v : x) v = rng.gamma(shape);
    const auto m = moments(x);
    CHECK(std::fabs(m.mean - shape) < 5 * std::sqrt(shape / 100000.0));
    CHECK(std::fabs(m.variance / shape - 1.0) < 0.05);
  }
  for (double mean : {0.0, 0.3, 4.0, 9.9, 10.0, 55.5, 1e6}) {
    std::vector<double> x(50000);
    for (auto& v : x) v = double(rng.poisson(mean));
    const auto m = moments(x);
    CHECK(std::fabs(m.mean - mean) <= 5 * std::sqrt(mean / 50000.0) + 1e-12);
    if (mean > 0) CHECK(std::fabs(m.variance / mean - 1.0) < 0.05);
  }
}

TEST_CASE("Poisson(30) matches its probability mass function") {
  Rng rng(5);
  const int n = 200000;
  std::vector<int> hist(40);
  for (int i = 0; i < n; ++i) ++hist[std::min<std::int64_t>(rng.poisson(30.0), 39) % 40];
  double pmf = std::exp(-30.0);
  for (int j = 0; j < 39; ++j) {
    if (j > 0) pmf *= 30.0 / j;
    const double sd = std::sqrt(n * pmf);
    CHECK(std::fabs(hist[std::size_t(j)] - n * pmf) < 5 * sd + 3);
  }
}
