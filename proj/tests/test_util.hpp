#pragma once

#include <algorithm>
#include <vector>

#include "bdlab/bd_direct.hpp"

#include "bdlab/mark_field.hpp"
#include "bdlab/rng.hpp"

namespace testutil {

// worked example: one mark per unit time, columns in this order.
inline const std::vector<int> kExampleLabels = {3, 6, 4, 4, 3, 8, 5, 6, 4, 2, 6, 7, 7, 3, 5, 8};

inline bdlab::MarkField field_from_labels(const std::vector<int>& labels, int k, double t) {
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) cols[static_cast<std::size_t>(labels[i] - 1)].push_back(double(i + 1));
  return bdlab::MarkField(t, std::move(cols));
}

// Small field on a coarse time grid so equal times across columns occur.
inline bdlab::MarkField small_field(bdlab::Rng& rng, int k, int max_marks, int grid, double t = 1.0) {
  std::vector<std::vector<double>> cols(static_cast<std::size_t>(k));
  const int n = static_cast<int>(rng.below(static_cast<std::uint32_t>(max_marks + 1)));
  for (int i = 0; i < n; ++i) {
    const int c = static_cast<int>(rng.below(static_cast<std::uint32_t>(k)));
    const double q = t * (1 + rng.below(static_cast<std::uint32_t>(grid))) / grid;
    cols[static_cast<std::size_t>(c)].push_back(q);
  }
  for (auto& col : cols) {
    std::sort(col.begin(), col.end());
    col.erase(std::unique(col.begin(), col.end()), col.end());
  }
  return bdlab::MarkField(t, std::move(cols));
}

inline bdlab::InitialCondition random_class_i(bdlab::Rng& rng, int k) {
  std::vector<bdlab::ExtInt> v{0};
  for (int j = 2; j <= k; ++j) {
    const auto r = rng.below(5);
    v.push_back(r == 0 ? bdlab::ExtInt::neg_inf() : bdlab::ExtInt(-static_cast<std::int64_t>(r - 1)));
  }
  return bdlab::InitialCondition::table(v);
}

}  // namespace testutil
