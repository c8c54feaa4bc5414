#include "bdlab/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace bdlab {

const char* to_string(TiePolicy p) { return p == TiePolicy::PreferJump ? "prefer_jump" : "prefer_stay"; }

int DirectedPath::column_at(double s) const {
  int c = start.column;
  for (const auto& j : jumps) {
    if (j.time <= s) ++c;
    else break;
  }
  return c;
}

namespace {

void check_window(const MarkField& f, SpaceTime from, SpaceTime to) {
  if (from.column < 1 || to.column < from.column) throw UsageError("lpp: need 1 <= from.column <= to.column");
  if (to.column > f.columns()) throw UsageError("lpp: field has fewer columns than the target");
  if (!(from.time >= 0.0) || to.time < from.time) throw UsageError("lpp: need 0 <= from.time <= to.time");
  if (to.time > f.horizon()) throw UsageError("lpp: target time beyond the field horizon");
}

std::span<const double> window(const MarkField& f, int c, double t1, double t2) {
  auto marks = f.column(c);
  const auto lo = std::upper_bound(marks.begin(), marks.end(), t1);
  const auto hi = std::upper_bound(lo, marks.end(), t2);
  return {lo, hi};
}

constexpr std::int32_t kNone = -1;

// Column-by-column form of the event-driven recursion: a mark of column c
// adds one to the best value in column c, and a path in column c may step
// to c+1 right after collecting a mark of c. Marks of column c-1 at the
// same time as a mark of c act first. When `Trace` is set, each collected
// mark remembers where its path entered the column under both tie rules.
template <bool Trace>
std::vector<ExtInt> sweep(const MarkField& f, SpaceTime from, SpaceTime to,
                          std::vector<std::span<const double>>* times,
                          std::vector<std::vector<std::int32_t>>* entry_up,
                          std::vector<std::vector<std::int32_t>>* entry_low,
                          std::vector<std::int32_t>* final_up, std::vector<std::int32_t>* final_low) {
  const int ncols = to.column - from.column + 1;
  std::vector<ExtInt> finals(static_cast<std::size_t>(ncols));
  std::vector<ExtInt> prev_vals, cur_vals;
  std::span<const double> prev_times;
  if constexpr (Trace) {
    times->assign(static_cast<std::size_t>(ncols), {});
    entry_up->assign(static_cast<std::size_t>(ncols), {});
    entry_low->assign(static_cast<std::size_t>(ncols), {});
    final_up->assign(static_cast<std::size_t>(ncols), kNone);
    final_low->assign(static_cast<std::size_t>(ncols), kNone);
  }

  for (int idx = 0; idx < ncols; ++idx) {
    const int c = from.column + idx;
    const auto own = window(f, c, from.time, to.time);
    const std::size_t n = own.size();
    cur_vals.resize(n);
    if constexpr (Trace) (*times)[static_cast<std::size_t>(idx)] = own;

    ExtInt best = idx == 0 ? ExtInt(0) : ExtInt::neg_inf();
    std::int32_t e_up = kNone, e_low = kNone;
    if (idx == 0) {
      for (std::size_t i = 0; i < n; ++i) cur_vals[i] = best = best + 1;
    } else {
      std::int32_t* up = nullptr;
      std::int32_t* low = nullptr;
      if constexpr (Trace) {
        auto& eu = (*entry_up)[static_cast<std::size_t>(idx)];
        auto& el = (*entry_low)[static_cast<std::size_t>(idx)];
        eu.resize(n);
        el.resize(n);
        up = eu.data();
        low = el.data();
      }
      std::size_t j = 0;
      const std::size_t pn = prev_times.size();
      auto absorb = [&](std::size_t jj) {
        const ExtInt cand = prev_vals[jj];
        if (cand > best) {
          best = cand;
          e_up = e_low = static_cast<std::int32_t>(jj);
        } else if (cand == best && cand.is_finite()) {
          // the earlier entry is the higher path
          e_low = static_cast<std::int32_t>(jj);
        }
      };
      for (std::size_t i = 0; i < n; ++i) {
        const double tau = own[i];
        while (j < pn && prev_times[j] <= tau) absorb(j++);
        best = best + 1;
        cur_vals[i] = best;
        if constexpr (Trace) {
          up[i] = e_up;
          low[i] = e_low;
        }
      }
      while (j < pn) absorb(j++);
    }
    finals[static_cast<std::size_t>(idx)] = best;
    if constexpr (Trace) {
      (*final_up)[static_cast<std::size_t>(idx)] = e_up;
      (*final_low)[static_cast<std::size_t>(idx)] = e_low;
    }
    std::swap(prev_vals, cur_vals);
    prev_times = own;
  }
  return finals;
}

struct Choice {
  ExtInt value = ExtInt::neg_inf();
  int end_column = 0;
};

Choice choose_end(const std::vector<ExtInt>& end_values, int first_column, TiePolicy policy) {
  Choice ch;
  for (std::size_t i = 0; i < end_values.size(); ++i) {
    const ExtInt v = end_values[i];
    if (v.is_neg_inf()) continue;
    const bool better = v > ch.value || (v == ch.value && policy == TiePolicy::PreferJump);
    if (better) {
      ch.value = v;
      ch.end_column = first_column + static_cast<int>(i);
    }
  }
  return ch;
}

std::vector<ExtInt> with_offsets(const std::vector<ExtInt>& finals, const InitialCondition& g, SpaceTime from,
                                 SpaceTime to) {
  std::vector<ExtInt> out(finals.size());
  for (std::size_t i = 0; i < finals.size(); ++i) {
    const int j = from.column + static_cast<int>(i);
    out[i] = finals[i] + g.at(to.column - j + 1);
  }
  return out;
}

}  // namespace

ExtInt LppTrace::column_value(int column) const {
  return final_value_.at(static_cast<std::size_t>(column - from_.column));
}

ExtInt LppTrace::end_value(int column) const { return end_value_.at(static_cast<std::size_t>(column - from_.column)); }

std::size_t LppTrace::mark_count() const {
  std::size_t n = 0;
  for (const auto& s : times_) n += s.size();
  return n;
}

std::vector<ExtInt> lpp_column_values(const MarkField& field, SpaceTime from, SpaceTime to) {
  check_window(field, from, to);
  return sweep<false>(field, from, to, nullptr, nullptr, nullptr, nullptr, nullptr);
}

LppTrace trace_lpp(const MarkField& field, const InitialCondition& g, SpaceTime from, SpaceTime to) {
  check_window(field, from, to);
  if (g.defined_columns() < to.column - from.column + 1) throw UsageError("lpp: initial condition too short");
  LppTrace tr;
  tr.from_ = from;
  tr.to_ = to;
  tr.final_value_ = sweep<true>(field, from, to, &tr.times_, &tr.entry_up_, &tr.entry_low_, &tr.final_up_,
                                &tr.final_low_);
  tr.end_value_ = with_offsets(tr.final_value_, g, from, to);
  return tr;
}

LppOutcome outcome(const LppTrace& trace, TiePolicy policy) {
  const Choice ch = choose_end(trace.end_value_, trace.from_.column, policy);
  return LppOutcome{ch.value, ch.end_column, std::nullopt, policy};
}

std::optional<DirectedPath> extract_geodesic(const LppTrace& trace, TiePolicy policy) {
  const Choice ch = choose_end(trace.end_value_, trace.from_.column, policy);
  if (ch.value.is_neg_inf()) return std::nullopt;
  const auto& entries = policy == TiePolicy::PreferJump ? trace.entry_up_ : trace.entry_low_;
  const auto& finals = policy == TiePolicy::PreferJump ? trace.final_up_ : trace.final_low_;

  DirectedPath path;
  path.start = trace.from_;
  path.end_time = trace.to_.time;
  auto idx = static_cast<std::size_t>(ch.end_column - trace.from_.column);
  std::int32_t e = finals[idx];
  while (idx > 0) {
    if (e == kNone) throw std::logic_error("extract_geodesic: broken trace");
    const auto& prev_times = trace.times_[idx - 1];
    path.jumps.push_back({prev_times[static_cast<std::size_t>(e)], trace.from_.column + static_cast<int>(idx) - 1});
    --idx;
    e = idx > 0 ? entries[idx][static_cast<std::size_t>(e)] : kNone;
  }
  std::reverse(path.jumps.begin(), path.jumps.end());
  return path;
}

LppOutcome lpp_point_to_point(const MarkField& field, const InitialCondition& g, SpaceTime from, SpaceTime to,
                              TiePolicy policy, bool trace) {
  if (trace) {
    const LppTrace tr = trace_lpp(field, g, from, to);
    LppOutcome out = outcome(tr, policy);
    out.geodesic = extract_geodesic(tr, policy);
    return out;
  }
  check_window(field, from, to);
  if (g.defined_columns() < to.column - from.column + 1) throw UsageError("lpp: initial condition too short");
  const auto finals = sweep<false>(field, from, to, nullptr, nullptr, nullptr, nullptr, nullptr);
  const Choice ch = choose_end(with_offsets(finals, g, from, to), from.column, policy);
  return LppOutcome{ch.value, ch.end_column, std::nullopt, policy};
}

LppOutcome lpp_height(const MarkField& field, const InitialCondition& g, double t, int k, TiePolicy policy,
                      bool trace) {
  if (k < 1) throw UsageError("lpp_height: k must be >= 1");
  if (!(t > 0.0)) throw UsageError("lpp_height: t must be > 0");
  return lpp_point_to_point(field, g, {0.0, 1}, {t, k}, policy, trace);
}

ExtInt evaluate_path(const DirectedPath& path, const MarkField& field, const InitialCondition& g, SpaceTime to) {
  if (path.end_time != to.time) throw UsageError("evaluate_path: path does not end at the target time");
  if (path.start.column < 1 || path.end_column() > to.column)
    throw UsageError("evaluate_path: path leaves the admissible columns");
  if (to.column > field.columns()) throw UsageError("evaluate_path: field too narrow");
  std::int64_t total = 0;
  double entry = path.start.time;
  bool closed = false;  // a column entered by a jump at `entry` also owns a mark at `entry`
  int c = path.start.column;
  auto count = [&](int col, double a, double b) {
    auto m = field.column(col);
    const auto lo = closed ? std::lower_bound(m.begin(), m.end(), a) : std::upper_bound(m.begin(), m.end(), a);
    return std::upper_bound(m.begin(), m.end(), b) - lo;
  };
  for (const auto& jump : path.jumps) {
    if (jump.from_column != c) throw UsageError("evaluate_path: jump from the wrong column");
    if (jump.time < entry || (jump.time == entry && !closed) || jump.time > path.end_time)
      throw UsageError("evaluate_path: jump times must increase inside the window");
    auto m = field.column(c);
    if (!std::binary_search(m.begin(), m.end(), jump.time))
      throw UsageError("evaluate_path: jump at a time that is not a mark of the departed column");
    total += count(c, entry, jump.time);
    entry = jump.time;
    closed = true;
    ++c;
  }
  total += count(c, entry, path.end_time);
  return ExtInt(total) + g.at(to.column - c + 1);
}

namespace {

void check_aux(const MarkField& field, double t, int k) {
  if (k < 1) throw UsageError("auxiliary_lpp: k must be >= 1");
  if (field.columns() < k) throw UsageError("auxiliary_lpp: field has fewer than k columns");
  if (!(t > 0.0) || t > field.horizon()) throw UsageError("auxiliary_lpp: t must lie in (0, horizon]");
}

class FenwickMax {
 public:
  explicit FenwickMax(int n) : tree_(static_cast<std::size_t>(n) + 1, 0) {}
  void update(int pos, std::int64_t v) {
    for (; pos < static_cast<int>(tree_.size()); pos += pos & -pos)
      tree_[static_cast<std::size_t>(pos)] = std::max(tree_[static_cast<std::size_t>(pos)], v);
  }
  [[nodiscard]] std::int64_t prefix_max(int pos) const {
    std::int64_t r = 0;
    for (; pos > 0; pos -= pos & -pos) r = std::max(r, tree_[static_cast<std::size_t>(pos)]);
    return r;
  }

 private:
  std::vector<std::int64_t> tree_;
};

}  // namespace

std::int64_t auxiliary_lpp(const MarkField& field, double t, int k) {
  check_aux(field, t, k);
  std::vector<std::pair<double, int>> events;
  for (int c = 1; c <= k; ++c) {
    for (double q : window(field, c, 0.0, t)) events.emplace_back(q, c);
  }
  std::sort(events.begin(), events.end());
  FenwickMax tree(k);
  std::int64_t best = 0;
  std::vector<std::int64_t> vals;
  for (std::size_t i = 0; i < events.size();) {
    // equal times cannot chain with each other: query the whole group first
    std::size_t j = i;
    vals.clear();
    while (j < events.size() && events[j].first == events[i].first) {
      vals.push_back(tree.prefix_max(events[j].second) + 1);
      ++j;
    }
    for (std::size_t a = i; a < j; ++a) {
      tree.update(events[a].second, vals[a - i]);
      best = std::max(best, vals[a - i]);
    }
    i = j;
  }
  return best;
}

std::int64_t auxiliary_lpp_columnwise(const MarkField& field, double t, int k) {
  check_aux(field, t, k);
  // first[v-1]: earliest time a chain in the columns seen so far reaches v
  std::vector<double> first;
  std::vector<double> merged;
  std::vector<std::int64_t> vals;
  for (int c = 1; c <= k; ++c) {
    const auto own = window(field, c, 0.0, t);
    vals.resize(own.size());
    std::int64_t w = 0;
    std::size_t p = 0;  // chains from lower columns strictly before tau
    for (std::size_t i = 0; i < own.size(); ++i) {
      while (p < first.size() && first[p] < own[i]) ++p;
      w = std::max(w, static_cast<std::int64_t>(p)) + 1;
      vals[i] = w;
    }
    // first <- min(first, own first-passage times)
    merged.clear();
    std::size_t i = 0;
    const auto top = std::max<std::int64_t>(static_cast<std::int64_t>(first.size()), w);
    for (std::int64_t v = 1; v <= top; ++v) {
      while (i < own.size() && vals[i] < v) ++i;
      const double mine = i < own.size() ? own[i] : std::numeric_limits<double>::infinity();
      const double theirs = v <= static_cast<std::int64_t>(first.size()) ? first[static_cast<std::size_t>(v - 1)]
                                                                         : std::numeric_limits<double>::infinity();
      merged.push_back(std::min(mine, theirs));
    }
    std::swap(first, merged);
  }
  return static_cast<std::int64_t>(first.size());
}

double GeodesicStats::deviation_at(double fraction) const {
  for (std::size_t i = 0; i < fractions.size(); ++i)
    if (fractions[i] == fraction) return deviations_at[i];
  throw UsageError("GeodesicStats: fraction was not evaluated");
}

GeodesicStats geodesic_deviation(const DirectedPath& path, double t, int k, std::span<const double> gammas,
                                 std::span<const double> fractions) {
  if (!(t > 0.0) || k < 1) throw UsageError("geodesic_deviation: need t > 0 and k >= 1");
  const double slope = static_cast<double>(k) / t;
  GeodesicStats st;
  double a = path.start.time;
  int c = path.start.column;
  auto segment = [&](double from, double to, int col) {
    st.sup_deviation = std::max({st.sup_deviation, std::fabs(col - slope * from), std::fabs(col - slope * to)});
  };
  for (const auto& j : path.jumps) {
    segment(a, j.time, c);
    a = j.time;
    ++c;
  }
  segment(a, path.end_time, c);

  st.fractions.assign(fractions.begin(), fractions.end());
  for (double s : fractions)
    st.deviations_at.push_back(std::fabs(path.column_at(s * t) - static_cast<double>(k) * s));
  for (double g : gammas) {
    Containment ct;
    ct.gamma = g;
    const double width = std::pow(static_cast<double>(k), g);
    ct.a_event = st.sup_deviation <= width;
    for (double d : st.deviations_at) ct.b_events.push_back(d <= width);
    st.containment.push_back(std::move(ct));
  }
  return st;
}

CrossSection cross_section_scores(const MarkField& field, double t, int alpha, double s, double gamma) {
  if (!(s > 0.0 && s < 1.0)) throw UsageError("cross_section_scores: s must lie in (0,1)");
  if (alpha < 1) throw UsageError("cross_section_scores: alpha must be >= 1");
  const double centre = s * static_cast<double>(alpha);
  const double half = std::pow(static_cast<double>(alpha), gamma);
  const int lo = static_cast<int>(std::ceil(centre - half));
  const int hi = static_cast<int>(std::floor(centre + half));
  if (lo > hi) throw UsageError("cross_section_scores: empty cross-section");

  CrossSection out;
  std::vector<int> cols;
  for (int c = lo; c <= hi; ++c) {
    if (c < 1 || c >= alpha) out.excluded.push_back(c);
    else cols.push_back(c);
  }
  if (cols.empty()) return out;

  const double st = s * t;
  const double rest = t - st;
  const auto left = lpp_column_values(field, {0.0, 1}, {st, cols.back()});
  for (int c : cols) {
    SectionScore sc;
    sc.column = c;
    const double kc = c;
    const ExtInt hs = left[static_cast<std::size_t>(c - 1)];
    sc.u_score = hs.is_neg_inf() ? -std::numeric_limits<double>::infinity()
                                 : (static_cast<double>(hs.value()) - st - 2.0 * std::sqrt(st * kc)) /
                                       std::sqrt(st * std::pow(kc, -1.0 / 3.0));
    const double span = static_cast<double>(alpha - c);
    const ExtInt hv = lpp_point_to_point(field, InitialCondition::flat(), {st, c}, {t, alpha}).value;
    sc.v_score = (static_cast<double>(hv.value()) - rest - 2.0 * std::sqrt(rest * span)) /
                 std::sqrt(rest * std::pow(span, -1.0 / 3.0));
    out.scores.push_back(sc);
  }
  return out;
}

}  // namespace bdlab
