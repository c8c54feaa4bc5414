#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bdlab/bd_direct.hpp"
#include "bdlab/ext_int.hpp"
#include "bdlab/mark_field.hpp"

namespace bdlab {

/// Which of the equally good predecessors a traced geodesic keeps.
/// PreferJump traces the pointwise-highest geodesic, PreferStay the lowest.
enum class TiePolicy { PreferStay, PreferJump };

const char* to_string(TiePolicy p);

struct SpaceTime {
  double time = 0.0;
  int column = 1;
};

struct PathJump {
  double time;      // a mark of `from_column`
  int from_column;  // the path moves to from_column + 1 at `time`
};

/// Monotone column trajectory: starts at `start`, steps up by one at each
/// jump, right-continuous, ends at `end_time`.
struct DirectedPath {
  SpaceTime start;
  std::vector<PathJump> jumps;
  double end_time = 0.0;

  [[nodiscard]] int column_at(double s) const;
  [[nodiscard]] int end_column() const { return start.column + static_cast<int>(jumps.size()); }
};

struct LppOutcome {
  ExtInt value;
  int end_column = 0;
  std::optional<DirectedPath> geodesic;
  TiePolicy tie_policy = TiePolicy::PreferJump;
};

/// Per-column DP record of one sweep, enough to backtrack geodesics under
/// either tie policy.
class LppTrace {
 public:
  [[nodiscard]] const SpaceTime& from() const { return from_; }
  [[nodiscard]] const SpaceTime& to() const { return to_; }
  /// Best value of a path sitting in `column` at the final time (before G).
  [[nodiscard]] ExtInt column_value(int column) const;
  /// column_value(j) + G(to.column - j + 1).
  [[nodiscard]] ExtInt end_value(int column) const;
  [[nodiscard]] std::size_t mark_count() const;

 private:
  friend LppTrace trace_lpp(const MarkField&, const InitialCondition&, SpaceTime, SpaceTime);
  friend LppOutcome outcome(const LppTrace&, TiePolicy);
  friend std::optional<DirectedPath> extract_geodesic(const LppTrace&, TiePolicy);

  SpaceTime from_, to_;
  std::vector<std::span<const double>> times_;            // window marks per column
  std::vector<std::vector<std::int32_t>> entry_up_, entry_low_;  // index into previous column, -1 = start
  std::vector<ExtInt> final_value_, end_value_;
  std::vector<std::int32_t> final_up_, final_low_;
};

/// Optimal value of paths from (0,1) to time t collecting at most k columns
/// plus the G offset G(k - u(t) + 1). Marks in (0, t] count.
LppOutcome lpp_height(const MarkField& field, const InitialCondition& g, double t, int k,
                      TiePolicy policy = TiePolicy::PreferJump, bool trace = false);

/// Same optimization restricted to marks in (from.time, to.time] and
/// columns from.column..to.column, starting in from.column.
LppOutcome lpp_point_to_point(const MarkField& field, const InitialCondition& g, SpaceTime from, SpaceTime to,
                              TiePolicy policy = TiePolicy::PreferJump, bool trace = false);

/// Best value per end column (index j-1 for column from.column + j - 1),
/// without any G offset. Column j of lpp_column_values(f, {0,1}, {t,k}) is
/// h_S(t, j) (seed initial condition) on the same field.
std::vector<ExtInt> lpp_column_values(const MarkField& field, SpaceTime from, SpaceTime to);

LppTrace trace_lpp(const MarkField& field, const InitialCondition& g, SpaceTime from, SpaceTime to);
LppOutcome outcome(const LppTrace& trace, TiePolicy policy);

/// Backtracks a geodesic; nullopt when the optimum is -inf.
std::optional<DirectedPath> extract_geodesic(const LppTrace& trace, TiePolicy policy);

/// Value of `path` on `field` for the target `to`: marks of column r in its
/// occupancy interval (entry, exit], closed at the exit jump, plus
/// G(to.column - u(to.time) + 1). On equal-time marks a column entered by a
/// jump at time s also collects its own mark at s, matching the
/// ascending-column processing order of the recursion. Throws UsageError if the path is not an
/// admissible restricted path (jump off a non-mark, wrong end time, ...).
ExtInt evaluate_path(const DirectedPath& path, const MarkField& field, const InitialCondition& g, SpaceTime to);

/// Longest chain of marks with strictly increasing times and nondecreasing
/// columns <= k, times in (0, t]. Time-ordered sweep with a Fenwick tree of
/// prefix maxima over columns.
std::int64_t auxiliary_lpp(const MarkField& field, double t, int k);

/// Same value by a column-by-column sweep over first-passage times; linear
/// in the number of marks.
std::int64_t auxiliary_lpp_columnwise(const MarkField& field, double t, int k);

inline constexpr double kDefaultFractionsArr[] = {0.25, 0.5, 0.75};
inline constexpr std::span<const double> kDefaultFractions{kDefaultFractionsArr};

struct Containment {
  double gamma = 0.0;
  bool a_event = false;         // whole path inside the k^gamma cylinder
  std::vector<bool> b_events;   // per fraction: local deviation <= k^gamma
};

struct GeodesicStats {
  double sup_deviation = 0.0;
  std::vector<double> fractions;
  std::vector<double> deviations_at;  // |u(s t) - k s| per fraction
  std::vector<Containment> containment;

  [[nodiscard]] double deviation_at(double fraction) const;
};

/// Transversal deviation of a path from the segment (0,0)-(t,k).
GeodesicStats geodesic_deviation(const DirectedPath& path, double t, int k,
                                 std::span<const double> gammas = {},
                                 std::span<const double> fractions = kDefaultFractions);


struct SectionScore {
  int column = 0;
  double u_score = 0.0;  // -inf when h_S(st, column) = -inf
  double v_score = 0.0;
};

struct CrossSection {
  std::vector<SectionScore> scores;
  std::vector<int> excluded;  // section columns with a degenerate rescaling
};

/// Rescaled left/right halves of a split at time s*t for every column of
/// the cylinder cross-section {k' : |k' - s*alpha| <= alpha^gamma}.
CrossSection cross_section_scores(const MarkField& field, double t, int alpha, double s, double gamma);

}  // namespace bdlab
