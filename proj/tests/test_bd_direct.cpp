#include <cmath>
#include <vector>

#include "bdlab/bd_direct.hpp"
#include "bdlab/lpp.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bdlab;

namespace {

std::vector<ExtInt> ints(std::initializer_list<std::int64_t> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("worked example: full profile and the height at site 8") {
  const auto h = apply_label_sequence(testutil::kExampleLabels, InitialCondition::flat(), 8);
  CHECK(h[7] == ExtInt(9));
  CHECK(h == ints({0, 1, 3, 4, 5, 6, 8, 9}));

  const auto f = testutil::field_from_labels(testutil::kExampleLabels, 8, 17.0);
  CHECK(simulate_heights(f, InitialCondition::flat(), 17.0, 8).heights == ints({0, 1, 3, 4, 5, 6, 8, 9}));
}

TEST_CASE("worked example cut after the tenth mark") {
  const std::vector<int> first10(testutil::kExampleLabels.begin(), testutil::kExampleLabels.begin() + 10);
  CHECK(apply_label_sequence(first10, InitialCondition::flat(), 8) == ints({0, 1, 2, 4, 4, 5, 0, 1}));

  const auto f = testutil::field_from_labels(testutil::kExampleLabels, 8, 17.0);
  const std::vector<double> times{10.5, 11.0, 17.0};
  const auto snaps = height_snapshots(f, InitialCondition::flat(), times, 8);
  REQUIRE(snaps.size() == 3);
  CHECK(snaps[0].heights == ints({0, 1, 2, 4, 4, 5, 0, 1}));
  // left limit: the mark at time 11 is not yet counted
  CHECK(snaps[1].heights == snaps[0].heights);
  CHECK(snaps[2].heights == ints({0, 1, 3, 4, 5, 6, 8, 9}));
}

TEST_CASE("no marks") {
  const MarkField f(5.0, std::vector<std::vector<double>>(4));
  CHECK(simulate_heights(f, InitialCondition::flat(), 5.0, 4).heights == ints({0, 0, 0, 0}));
  const auto s = simulate_heights(f, InitialCondition::seed(), 5.0, 4);
  CHECK(s.at(1) == ExtInt(0));
  for (int j = 2; j <= 4; ++j) CHECK(s.at(j).is_neg_inf());
}

TEST_CASE("height_snapshots argument handling") {
  const auto f = generate_marks({1, 0, 0, 1}, 10.0, 3);
  CHECK(height_snapshots(f, InitialCondition::flat(), std::vector<double>{}, 3).empty());
  CHECK_THROWS_AS(height_snapshots(f, InitialCondition::flat(), std::vector<double>{2.0, 1.0}, 3), UsageError);
  const std::vector<double> one{7.5};
  CHECK(height_snapshots(f, InitialCondition::flat(), one, 3)[0].heights ==
        simulate_heights(f, InitialCondition::flat(), 7.5, 3).heights);
  CHECK_THROWS_AS(simulate_heights(f, InitialCondition::flat(), 10.0, 4), UsageError);
}

TEST_CASE("class I membership") {
  CHECK(InitialCondition::flat().in_class_i(5));
  CHECK(InitialCondition::seed().in_class_i(5));
  CHECK(InitialCondition::table(ints({0, -2, 0})).in_class_i(3));
  CHECK_FALSE(InitialCondition::table(ints({0, 1, 0})).in_class_i(3));
  CHECK_FALSE(InitialCondition::table(ints({-1, 0, 0})).in_class_i(3));
  CHECK_FALSE(InitialCondition::table(ints({0, 0})).in_class_i(3));
}

TEST_CASE("column-by-column sweep agrees with time-ordered replay, including ties") {
  Rng rng(StreamKey{21, 0, 0, 1});
  for (int rep = 0; rep < 2000; ++rep) {
    const int k = 1 + int(rng.below(5));
    const auto f = testutil::small_field(rng, k, 16, 6);
    const auto g = testutil::random_class_i(rng, k);
    for (double t : {0.5, 1.0}) CHECK(simulate_heights(f, g, t, k).heights == oracle::bd_forward(f, g, t, k));
  }
}

TEST_CASE("column 1 is exact and heights are monotone in G") {
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    const auto f = generate_marks({2, 0, rep, 1}, 15.0, 6);
    Rng rng(StreamKey{2, 0, rep, StreamKey::kAuxBase});
    const auto g = testutil::random_class_i(rng, 6);
    const auto hs = simulate_heights(f, InitialCondition::seed(), 15.0, 6);
    const auto hg = simulate_heights(f, g, 15.0, 6);
    const auto hf = simulate_heights(f, InitialCondition::flat(), 15.0, 6);
    CHECK(hf.at(1) == ExtInt(std::int64_t(f.column(1).size())));
    for (int j = 1; j <= 6; ++j) {
      CHECK(hs.at(j) <= hg.at(j));
      CHECK(hg.at(j) <= hf.at(j));
      CHECK(hf.at(j) >= ExtInt(0));
    }
  }
}

TEST_CASE("adding a mark never lowers a height") {
  Rng rng(StreamKey{4, 0, 0, 1});
  for (int rep = 0; rep < 500; ++rep) {
    const int k = 2 + int(rng.below(4));
    std::vector<int> labels;
    const int n = int(rng.below(20));
    for (int i = 0; i < n; ++i) labels.push_back(1 + int(rng.below(std::uint32_t(k))));
    const auto before = apply_label_sequence(labels, InitialCondition::flat(), k);
    auto more = labels;
    more.insert(more.begin() + rng.below(std::uint32_t(n + 1)), 1 + int(rng.below(std::uint32_t(k))));
    const auto after = apply_label_sequence(more, InitialCondition::flat(), k);
    for (int j = 0; j < k; ++j) CHECK(after[std::size_t(j)] >= before[std::size_t(j)]);
  }
}

TEST_CASE("an inserted mark can raise several columns") {
  // labels 2,1 give (1,1); inserting a 1 first gives (2,2): two columns move
  const auto a = apply_label_sequence(std::vector<int>{2, 1}, InitialCondition::flat(), 2);
  const auto b = apply_label_sequence(std::vector<int>{1, 2, 1}, InitialCondition::flat(), 2);
  CHECK(a == ints({1, 1}));
  CHECK(b == ints({2, 2}));
}

TEST_CASE("pathwise reversal identity") {
  for (std::uint64_t rep = 0; rep < 300; ++rep) {
    const int k = 1 + int(rep % 9);
    const double t = 5.0 + double(rep % 7) * 3.0;
    const auto q = generate_marks({8, 1, rep, 1}, t, k);
    const auto y = reverse_field(q);
    Rng rng(StreamKey{8, 1, rep, StreamKey::kAuxBase});
    for (const auto& g : {InitialCondition::flat(), InitialCondition::seed(), testutil::random_class_i(rng, k)}) {
      CHECK(simulate_heights(q, g, t, k).at(k) == lpp_height(y, g, t, k).value);
    }
  }
}

TEST_CASE("reversal identity on the worked example field") {
  const auto f = testutil::field_from_labels(testutil::kExampleLabels, 8, 17.0);
  const auto out = lpp_height(reverse_field(f), InitialCondition::flat(), 17.0, 8);
  CHECK(out.value == ExtInt(9));
}

TEST_CASE("jump-chain sampler matches the field simulator in law") {
  const int n = 4000, k = 6;
  const double t = 30.0;
  double m1 = 0, m2 = 0, v1 = 0, v2 = 0;
  for (int rep = 0; rep < n; ++rep) {
    const StreamKey key{31, 2, std::uint64_t(rep), 1};
    const double a = double(simulate_heights(generate_marks(key, t, k), InitialCondition::flat(), t, k).at(k).value());
    const double b = double(simulate_heights_jump_chain(key.aux(0), InitialCondition::flat(), t, k).at(k).value());
    m1 += a, m2 += b, v1 += a * a, v2 += b * b;
  }
  m1 /= n, m2 /= n;
  v1 = v1 / n - m1 * m1, v2 = v2 / n - m2 * m2;
  CHECK(std::fabs(m1 - m2) < 5.0 * std::sqrt((v1 + v2) / n));
  CHECK(std::fabs(v1 / v2 - 1.0) < 0.15);

  const auto s = simulate_heights_jump_chain({1, 0, 0, 1}, InitialCondition::seed(), 0.01, 5);
  CHECK(s.at(5).is_neg_inf());
}

TEST_CASE("reversal identity with equal-time marks across columns") {
  Rng rng(StreamKey{22, 0, 0, 1});
  for (int rep = 0; rep < 3000; ++rep) {
    const int k = 1 + int(rng.below(5));
    const auto q = testutil::small_field(rng, k, 16, 5);
    const auto g = testutil::random_class_i(rng, k);
    CHECK(simulate_heights(q, g, 1.0, k).at(k) == lpp_height(reverse_field(q), g, 1.0, k).value);
  }
}
