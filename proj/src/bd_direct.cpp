#include "bdlab/bd_direct.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace bdlab {

ExtInt InitialCondition::at(int j) const {
  if (j < 1) throw UsageError("InitialCondition: column index must be >= 1");
  return std::visit(
      [j](const auto& r) -> ExtInt {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Flat>) {
          return ExtInt(0);
        } else if constexpr (std::is_same_v<T, Seed>) {
          return j == 1 ? ExtInt(0) : ExtInt::neg_inf();
        } else {
          if (static_cast<std::size_t>(j) > r.values.size())
            throw UsageError("InitialCondition: table does not cover column " + std::to_string(j));
          return r.values[static_cast<std::size_t>(j - 1)];
        }
      },
      rep_);
}

int InitialCondition::defined_columns() const {
  if (const auto* t = std::get_if<Table>(&rep_)) return static_cast<int>(t->values.size());
  return std::numeric_limits<int>::max();
}

bool InitialCondition::in_class_i(int k) const {
  if (k > defined_columns()) return false;
  if (at(1) != ExtInt(0)) return false;
  for (int j = 2; j <= k; ++j)
    if (at(j) > ExtInt(0)) return false;
  return true;
}

const char* InitialCondition::name() const {
  if (is_flat()) return "flat";
  if (is_seed()) return "seed";
  return "table";
}

bool pointwise_le(const InitialCondition& g1, const InitialCondition& g2, int k) {
  for (int j = 1; j <= k; ++j)
    if (g1.at(j) > g2.at(j)) return false;
  return true;
}

namespace {

void check_inputs(const MarkField& f, const InitialCondition& g, double t, int k) {
  if (k < 1) throw UsageError("simulate_heights: k must be >= 1");
  if (f.columns() < k) throw UsageError("simulate_heights: field has fewer than k columns");
  if (!(t > 0.0) || t > f.horizon()) throw UsageError("simulate_heights: t must lie in (0, horizon]");
  if (g.defined_columns() < k) throw UsageError("simulate_heights: initial condition shorter than k");
}

// Trajectory of one column restricted to marks before `limit`: mark times
// and the height right after each mark.
struct ColumnTrajectory {
  ExtInt initial;
  std::vector<double> times;
  std::vector<ExtInt> after;

  // height at s- (marks strictly before s)
  [[nodiscard]] ExtInt left_limit(double s) const {
    auto it = std::lower_bound(times.begin(), times.end(), s);
    if (it == times.begin()) return initial;
    return after[static_cast<std::size_t>(it - times.begin() - 1)];
  }
};

// Advances column-by-column; calls `visit(column, trajectory)` for each.
template <class Visit>
void sweep_columns(const MarkField& f, const InitialCondition& g, double limit, int k, Visit&& visit) {
  ColumnTrajectory prev, cur;
  for (int c = 1; c <= k; ++c) {
    auto marks = f.column(c);
    const auto end = std::lower_bound(marks.begin(), marks.end(), limit);
    const auto n = static_cast<std::size_t>(end - marks.begin());
    cur.initial = g.at(c);
    cur.times.assign(marks.begin(), end);
    cur.after.resize(n);
    ExtInt h = cur.initial;
    if (c == 1) {
      for (std::size_t i = 0; i < n; ++i) cur.after[i] = h = h + 1;
    } else {
      ExtInt left = prev.initial;
      std::size_t j = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double tau = cur.times[i];
        // equal times: the lower column acts first
        while (j < prev.times.size() && prev.times[j] <= tau) left = prev.after[j++];
        h = max(left, h) + 1;
        cur.after[i] = h;
      }
    }
    visit(c, std::as_const(cur));
    std::swap(prev, cur);
  }
}

}  // namespace

HeightProfile simulate_heights(const MarkField& q_field, const InitialCondition& g, double t, int k) {
  check_inputs(q_field, g, t, k);
  HeightProfile out{t, std::vector<ExtInt>(static_cast<std::size_t>(k))};
  sweep_columns(q_field, g, t, k, [&](int c, const ColumnTrajectory& tr) {
    out.heights[static_cast<std::size_t>(c - 1)] = tr.after.empty() ? tr.initial : tr.after.back();
  });
  return out;
}

std::vector<HeightProfile> height_snapshots(const MarkField& q_field, const InitialCondition& g,
                                            std::span<const double> times, int k) {
  if (times.empty()) return {};
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end())
    throw UsageError("height_snapshots: times must be strictly increasing");
  check_inputs(q_field, g, times.back(), k);
  if (!(times.front() > 0.0)) throw UsageError("height_snapshots: times must be > 0");
  std::vector<HeightProfile> out;
  out.reserve(times.size());
  for (double s : times) out.push_back({s, std::vector<ExtInt>(static_cast<std::size_t>(k))});
  sweep_columns(q_field, g, times.back(), k, [&](int c, const ColumnTrajectory& tr) {
    for (auto& p : out) p.heights[static_cast<std::size_t>(c - 1)] = tr.left_limit(p.time);
  });
  return out;
}

std::vector<ExtInt> apply_label_sequence(std::span<const int> labels, const InitialCondition& g, int k) {
  if (k < 1) throw UsageError("apply_label_sequence: k must be >= 1");
  std::vector<ExtInt> h(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) h[static_cast<std::size_t>(j - 1)] = g.at(j);
  for (int c : labels) {
    if (c < 1 || c > k) throw UsageError("apply_label_sequence: label out of range");
    auto& hc = h[static_cast<std::size_t>(c - 1)];
    hc = (c == 1 ? hc : max(h[static_cast<std::size_t>(c - 2)], hc)) + 1;
  }
  return h;
}

HeightProfile simulate_heights_jump_chain(const StreamKey& key, const InitialCondition& g, double t, int k) {
  if (k < 1) throw UsageError("simulate_heights_jump_chain: k must be >= 1");
  if (!(t > 0.0)) throw UsageError("simulate_heights_jump_chain: t must be > 0");
  if (g.defined_columns() < k) throw UsageError("simulate_heights_jump_chain: initial condition shorter than k");

  // -inf is carried as a far-negative floor so the hot loop is branch-free;
  // anything below kCut after at most M increments is still -inf.
  constexpr std::int64_t kFloor = std::numeric_limits<std::int64_t>::min() / 4;
  constexpr std::int64_t kCut = std::numeric_limits<std::int64_t>::min() / 8;

  std::vector<std::int64_t> h(static_cast<std::size_t>(k) + 1);
  h[0] = kFloor;
  for (int j = 1; j <= k; ++j) {
    const ExtInt v = g.at(j);
    h[static_cast<std::size_t>(j)] = v.is_neg_inf() ? kFloor : v.value();
  }

  Rng rng(key);
  const std::int64_t total = rng.poisson(static_cast<double>(k) * t);
  const auto n = static_cast<std::uint64_t>(k);
  std::int64_t* hp = h.data();
  std::int64_t i = 0;
  // two labels per 64-bit draw (Lemire, exact with rejection)
  const auto threshold = static_cast<std::uint32_t>(-static_cast<std::uint32_t>(n) % static_cast<std::uint32_t>(n));
  auto label = [&](std::uint32_t x) -> std::int64_t {
    std::uint64_t m = std::uint64_t{x} * n;
    while (static_cast<std::uint32_t>(m) < threshold) m = (rng() >> 32) * n;
    return static_cast<std::int64_t>(m >> 32) + 1;
  };
  for (; i + 1 < total; i += 2) {
    const std::uint64_t r = rng();
    const std::int64_t c1 = label(static_cast<std::uint32_t>(r));
    hp[c1] = std::max(hp[c1 - 1], hp[c1]) + 1;
    const std::int64_t c2 = label(static_cast<std::uint32_t>(r >> 32));
    hp[c2] = std::max(hp[c2 - 1], hp[c2]) + 1;
  }
  if (i < total) {
    const std::int64_t c = label(static_cast<std::uint32_t>(rng() >> 32));
    hp[c] = std::max(hp[c - 1], hp[c]) + 1;
  }

  HeightProfile out{t, std::vector<ExtInt>(static_cast<std::size_t>(k))};
  for (int j = 1; j <= k; ++j) {
    const std::int64_t v = h[static_cast<std::size_t>(j)];
    out.heights[static_cast<std::size_t>(j - 1)] = v < kCut ? ExtInt::neg_inf() : ExtInt(v);
  }
  return out;
}

}  // namespace bdlab
