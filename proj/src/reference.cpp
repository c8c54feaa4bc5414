#include "bdlab/reference.hpp"

#include <algorithm>
#include <functional>
#include <utility>

namespace bdlab::reference {

namespace {

// Marks of column c in (a, b], or [a, b] when `closed` (column entered by a
// jump at a).
std::int64_t count_in(const MarkField& f, int c, double a, double b, bool closed) {
  std::int64_t n = 0;
  for (double q : f.column(c))
    if ((q > a || (closed && q == a)) && q <= b) ++n;
  return n;
}

}  // namespace

std::vector<EnumeratedPath> all_paths(const MarkField& f, const InitialCondition& g, SpaceTime from, SpaceTime to) {
  std::vector<EnumeratedPath> out;
  DirectedPath cur;
  cur.start = from;
  cur.end_time = to.time;
  std::function<void(int, double, bool, std::int64_t)> rec = [&](int c, double entry, bool closed,
                                                                  std::int64_t acc) {
    out.push_back({cur, ExtInt(acc + count_in(f, c, entry, to.time, closed)) + g.at(to.column - c + 1)});
    if (c == to.column) return;
    for (double q : f.column(c)) {
      if (q < entry || (q == entry && !closed) || q > to.time) continue;
      cur.jumps.push_back({q, c});
      rec(c + 1, q, true, acc + count_in(f, c, entry, q, closed));
      cur.jumps.pop_back();
    }
  };
  rec(from.column, from.time, false, 0);
  return out;
}

ExtInt best_value(const std::vector<EnumeratedPath>& paths) {
  ExtInt b = ExtInt::neg_inf();
  for (const auto& p : paths) b = max(b, p.value);
  return b;
}

std::int64_t chain_quadratic(const MarkField& f, double t, int k) {
  std::vector<std::pair<double, int>> m;
  for (int c = 1; c <= k; ++c)
    for (double q : f.column(c))
      if (q <= t) m.emplace_back(q, c);
  std::sort(m.begin(), m.end());
  std::vector<std::int64_t> dp(m.size(), 1);
  std::int64_t best = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (m[j].first < m[i].first && m[j].second <= m[i].second) dp[i] = std::max(dp[i], dp[j] + 1);
    best = std::max(best, dp[i]);
  }
  return best;
}

std::vector<ExtInt> bd_forward(const MarkField& f, const InitialCondition& g, double t, int k) {
  std::vector<std::pair<double, int>> m;
  for (int c = 1; c <= k; ++c)
    for (double q : f.column(c))
      if (q < t) m.emplace_back(q, c);
  std::sort(m.begin(), m.end());
  std::vector<int> labels;
  labels.reserve(m.size());
  for (const auto& [q, c] : m) labels.push_back(c);
  return apply_label_sequence(labels, g, k);
}

namespace {

const std::vector<int> kExampleLabels = {3, 6, 4, 4, 3, 8, 5, 6, 4, 2, 6, 7, 7, 3, 5, 8};

MarkField example_field() {
  std::vector<std::vector<double>> cols(8);
  for (std::size_t i = 0; i < kExampleLabels.size(); ++i) cols[static_cast<std::size_t>(kExampleLabels[i] - 1)].push_back(double(i + 1));
  return MarkField(17.0, std::move(cols));
}

// <= max_marks marks on a coarse grid of `grid` times so equal times occur.
MarkField small_field(Rng& rng, int k, int max_marks, int grid) {
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(k));
  const int n = static_cast<int>(rng.below(static_cast<std::uint32_t>(max_marks + 1)));
  for (int i = 0; i < n; ++i) {
    const auto c = rng.below(static_cast<std::uint32_t>(k));
    cols[c].push_back(double(1 + rng.below(static_cast<std::uint32_t>(grid))) / grid);
  }
  for (auto& col : cols) {
    std::sort(col.begin(), col.end());
    col.erase(std::unique(col.begin(), col.end()), col.end());
  }
  return MarkField(1.0, std::move(cols));
}

InitialCondition random_class_i(Rng& rng, int k) {
  std::vector<ExtInt> v{0};
  for (int j = 2; j <= k; ++j) {
    const auto r = rng.below(5);
    v.push_back(r == 0 ? ExtInt::neg_inf() : ExtInt(-static_cast<std::int64_t>(r - 1)));
  }
  return InitialCondition::table(v);
}

bool geodesic_ok(const LppOutcome& out, const MarkField& f, const InitialCondition& g, SpaceTime to) {
  if (out.value.is_neg_inf()) return !out.geodesic.has_value();
  return out.geodesic && evaluate_path(*out.geodesic, f, g, to) == out.value;
}

}  // namespace

GoldenReport run_golden(std::size_t instances, std::uint64_t seed) {
  GoldenReport rep;
  const auto flat = InitialCondition::flat();
  const std::vector<ExtInt> profile{0, 1, 3, 4, 5, 6, 8, 9};
  const std::vector<ExtInt> cut{0, 1, 2, 4, 4, 5, 0, 1};
  const auto q = example_field();
  rep.example_profile = apply_label_sequence(kExampleLabels, flat, 8) == profile &&
                     simulate_heights(q, flat, 17.0, 8).heights == profile;
  const std::vector<int> first10(kExampleLabels.begin(), kExampleLabels.begin() + 10);
  const std::vector<double> at{10.5};
  rep.example_cut = apply_label_sequence(first10, flat, 8) == cut && height_snapshots(q, flat, at, 8)[0].heights == cut;
  const auto y = reverse_field(q);
  rep.example_reversed = true;
  for (auto policy : {TiePolicy::PreferJump, TiePolicy::PreferStay}) {
    const auto out = lpp_height(y, flat, 17.0, 8, policy, true);
    rep.example_reversed = rep.example_reversed && out.value == ExtInt(9) && geodesic_ok(out, y, flat, {17.0, 8});
  }

  Rng rng(StreamKey{seed, 0, 0, StreamKey::kAuxBase});
  for (std::size_t i = 0; i < instances; ++i) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const auto f = small_field(rng, k, 12, i % 2 ? 5 : 1000);
    const auto g = i % 3 == 0 ? flat : i % 3 == 1 ? InitialCondition::seed() : random_class_i(rng, k);
    bool ok = true;
    const ExtInt best = best_value(all_paths(f, g, {0.0, 1}, {1.0, k}));
    for (auto policy : {TiePolicy::PreferJump, TiePolicy::PreferStay}) {
      const auto out = lpp_height(f, g, 1.0, k, policy, true);
      ok = ok && out.value == best && geodesic_ok(out, f, g, {1.0, k});
    }
    const std::int64_t chain = chain_quadratic(f, 1.0, k);
    ok = ok && auxiliary_lpp(f, 1.0, k) == chain && auxiliary_lpp_columnwise(f, 1.0, k) == chain;

    const int k1 = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(k)));
    const int k2 = k1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(k - k1 + 1)));
    const double t1 = double(rng.below(3)) / 5.0;
    const double t2 = t1 + double(rng.below(3)) / 5.0;
    const ExtInt pp_best = best_value(all_paths(f, g, {t1, k1}, {t2, k2}));
    for (auto policy : {TiePolicy::PreferJump, TiePolicy::PreferStay}) {
      const auto out = lpp_point_to_point(f, g, {t1, k1}, {t2, k2}, policy, true);
      ok = ok && out.value == pp_best && geodesic_ok(out, f, g, {t2, k2});
    }
    ++rep.instances;
    rep.mismatches += !ok;
  }
  return rep;
}

}  // namespace bdlab::reference
