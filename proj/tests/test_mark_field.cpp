#include <cmath>
#include <sstream>

#include "bdlab/mark_field.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bdlab;

TEST_CASE("generate_marks is a pure function of the key") {
  const StreamKey key{7, 1, 3, 1};
  const auto a = generate_marks(key, 50.0, 4);
  const auto b = generate_marks(key, 50.0, 4);
  CHECK(a == b);
  const auto c = generate_marks(key.with_replica(4), 50.0, 4);
  CHECK_FALSE(a == c);
  // lazily extending to more columns keeps the existing ones
  const auto d = generate_marks(key, 50.0, 6);
  for (int r = 1; r <= 4; ++r) CHECK(std::equal(a.column(r).begin(), a.column(r).end(), d.column(r).begin(),
                                                d.column(r).end()));
}

TEST_CASE("generate_marks validates arguments") {
  CHECK_THROWS_AS(generate_marks({}, 0.0, 1), UsageError);
  CHECK_THROWS_AS(generate_marks({}, -1.0, 1), UsageError);
  CHECK_THROWS_AS(generate_marks({}, 1.0, 0), UsageError);
  const auto f = generate_marks({}, 1e-4, 3);
  CHECK(f.columns() == 3);
  CHECK(f.horizon() == 1e-4);
}

TEST_CASE("marks are strictly increasing inside (0, t]") {
  const auto f = generate_marks({11, 0, 0, 1}, 200.0, 5);
  for (int r = 1; r <= 5; ++r) {
    double prev = 0.0;
    for (double q : f.column(r)) {
      CHECK(q > prev);
      CHECK(q <= 200.0);
      prev = q;
    }
  }
  CHECK_THROWS_AS(MarkField(1.0, {{0.5, 0.4}}), UsageError);
  CHECK_THROWS_AS(MarkField(1.0, {{1.5}}), UsageError);
  CHECK_THROWS_AS(MarkField(1.0, {{0.0}}), UsageError);
}

TEST_CASE("Poisson(1000) column counts stay within 5 standard deviations") {
  // P(|N - 1000| > 5 sqrt(1000)) is about 6e-7 for Poisson(1000)
  int outside = 0;
  for (std::uint64_t rep = 0; rep < 2000; ++rep) {
    const auto f = generate_marks({5, 0, rep, 1}, 1000.0, 1);
    if (std::fabs(double(f.total_marks()) - 1000.0) > 5.0 * std::sqrt(1000.0)) ++outside;
  }
  CHECK(outside == 0);
}

TEST_CASE("column counts are uncorrelated across columns") {
  const int n = 20000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int rep = 0; rep < n; ++rep) {
    const auto f = generate_marks({9, 0, std::uint64_t(rep), 1}, 20.0, 2);
    const double x = double(f.column(1).size()), y = double(f.column(2).size());
    sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
  }
  const double cov = sxy / n - sx / n * sy / n;
  const double rho = cov / std::sqrt((sxx / n - sx / n * sx / n) * (syy / n - sy / n * sy / n));
  CHECK(std::fabs(rho) < 0.04);
  CHECK(std::fabs(sx / n - 20.0) < 0.2);
}

TEST_CASE("reverse_field maps column r to k-r+1 and s to t-s") {
  const MarkField f(1.0, {{}, {0.3}, {}});
  const auto r = reverse_field(f);
  CHECK(r.column(1).empty());
  REQUIRE(r.column(2).size() == 1);
  CHECK(r.column(2)[0] == doctest::Approx(0.7));
  CHECK(r.column(3).empty());

  const MarkField empty(2.0, {{}, {}});
  CHECK(reverse_field(empty) == empty);

  // a mark exactly at t is dropped
  const MarkField edge(1.0, {{0.25, 1.0}});
  CHECK(reverse_field(edge).column(1).size() == 1);
}

TEST_CASE("reversal is an involution up to rounding") {
  const auto f = generate_marks({3, 0, 0, 1}, 30.0, 5);
  const auto rr = reverse_field(reverse_field(f));
  for (int r = 1; r <= 5; ++r) {
    REQUIRE(rr.column(r).size() == f.column(r).size());
    for (std::size_t i = 0; i < f.column(r).size(); ++i) CHECK(rr.column(r)[i] == doctest::Approx(f.column(r)[i]).epsilon(1e-12));
  }
}

TEST_CASE("binary dump and load round-trip") {
  const auto f = generate_marks({1, 2, 3, 1}, 12.5, 3);
  std::stringstream ss;
  dump_field(f, ss);
  const auto bytes = ss.str();
  CHECK(bytes.size() == 8 + 8 + 3 * 8 + 8 * f.total_marks());
  std::stringstream in(bytes);
  CHECK(load_field(in) == f);
  std::stringstream bad(bytes.substr(0, 20));
  CHECK_THROWS_AS(load_field(bad), UsageError);
}
