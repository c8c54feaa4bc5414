#pragma once

#include <span>
#include <variant>
#include <vector>

#include "bdlab/ext_int.hpp"
#include "bdlab/mark_field.hpp"

namespace bdlab {

/// Initial profile G over columns 1, 2, ...
class InitialCondition {
 public:
  struct Flat {};
  struct Seed {};
  struct Table {
    std::vector<ExtInt> values;  // values[j-1] = G(j)
  };

  static InitialCondition flat() { return InitialCondition(Flat{}); }
  static InitialCondition seed() { return InitialCondition(Seed{}); }
  static InitialCondition table(std::vector<ExtInt> values) { return InitialCondition(Table{std::move(values)}); }

  /// G(j) for j >= 1. Tables throw UsageError beyond their length.
  [[nodiscard]] ExtInt at(int j) const;

  /// Largest column index this condition defines (unbounded for Flat/Seed).
  [[nodiscard]] int defined_columns() const;

  /// S <= G <= F on columns 1..k.
  [[nodiscard]] bool in_class_i(int k) const;

  [[nodiscard]] bool is_flat() const { return std::holds_alternative<Flat>(rep_); }
  [[nodiscard]] bool is_seed() const { return std::holds_alternative<Seed>(rep_); }

  [[nodiscard]] const char* name() const;

 private:
  using Rep = std::variant<Flat, Seed, Table>;
  explicit InitialCondition(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// G1 <= G2 on columns 1..k.
bool pointwise_le(const InitialCondition& g1, const InitialCondition& g2, int k);

struct HeightProfile {
  double time = 0.0;
  std::vector<ExtInt> heights;  // heights[j-1] = h(time-, j)

  [[nodiscard]] ExtInt at(int j) const { return heights.at(static_cast<std::size_t>(j - 1)); }
};

/// Left limit h_G(t-, 1..k) of one-sided ballistic deposition driven by the
/// marks of `q_field`. A mark in column j+1 sets h(j+1) <- 1 + max(h(j), h(j+1));
/// column 1 only counts its own marks. Marks at equal times are applied in
/// ascending column order.
HeightProfile simulate_heights(const MarkField& q_field, const InitialCondition& g, double t, int k);

/// Profiles at each of `times` (increasing, within the horizon) from one pass.
std::vector<HeightProfile> height_snapshots(const MarkField& q_field, const InitialCondition& g,
                                            std::span<const double> times, int k);

/// Heights applied to an explicit sequence of column labels (1-based), in
/// order. Used for hand-built mark sequences.
std::vector<ExtInt> apply_label_sequence(std::span<const int> labels, const InitialCondition& g, int k);

/// Exact-in-law sample of h_G(t-, 1..k) through the embedded jump chain:
/// the superposition of the k columns is a rate-k Poisson process whose
/// marks carry i.i.d. uniform column labels, so only the total count and
/// the label sequence are drawn. Mark times are never materialized.
HeightProfile simulate_heights_jump_chain(const StreamKey& key, const InitialCondition& g, double t, int k);

}  // namespace bdlab
