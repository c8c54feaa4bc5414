#pragma once

// Slow reference implementations: exhaustive path enumeration and the
// quadratic chain DP. Used by the golden suite and the tests.

#include <cstdint>
#include <vector>

#include "bdlab/bd_direct.hpp"
#include "bdlab/lpp.hpp"
#include "bdlab/mark_field.hpp"

namespace bdlab::reference {

struct EnumeratedPath {
  DirectedPath path;
  ExtInt value;
};

/// Every restricted path from `from` to time to.time ending in a column
/// <= to.column, with its value.
std::vector<EnumeratedPath> all_paths(const MarkField& f, const InitialCondition& g, SpaceTime from, SpaceTime to);

ExtInt best_value(const std::vector<EnumeratedPath>& paths);

/// Longest chain with strictly increasing times and nondecreasing columns
/// <= k, by the O(N^2) DP.
std::int64_t chain_quadratic(const MarkField& f, double t, int k);

/// BD# by replaying the marks before t sorted by (time, column).
std::vector<ExtInt> bd_forward(const MarkField& f, const InitialCondition& g, double t, int k);

struct GoldenReport {
  bool example_profile = false;    // (0,1,3,4,5,6,8,9) and h(8) = 9
  bool example_cut = false;        // (0,1,2,4,4,5,0,1) after ten marks
  bool example_reversed = false;   // LPP value 9 on the reversed field with a 9-mark geodesic
  std::size_t instances = 0;
  std::size_t mismatches = 0;   // small-instance disagreements with enumeration
  [[nodiscard]] bool example_ok() const { return example_profile && example_cut && example_reversed; }
};

/// Worked-example golden values plus `instances` random small fields (<= 12 marks,
/// k <= 4) checked against enumeration for lpp_height, lpp_point_to_point,
/// both L routes and both traced geodesics.
GoldenReport run_golden(std::size_t instances, std::uint64_t seed);

}  // namespace bdlab::reference
