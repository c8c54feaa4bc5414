#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "bdlab/rng.hpp"

namespace bdlab {

/// Realization of k independent rate-1 Poisson processes on (0, t].
///
/// Column r (1-based) holds strictly increasing mark times in (0, t].
/// Values are immutable after construction.
class MarkField {
 public:
  MarkField() = default;

  /// Validates the layout; throws UsageError on out-of-range or unsorted
  /// times.
  MarkField(double horizon, std::vector<std::vector<double>> columns, StreamKey key = {});

  [[nodiscard]] double horizon() const { return horizon_; }
  [[nodiscard]] int columns() const { return static_cast<int>(cols_.size()); }
  [[nodiscard]] const StreamKey& key() const { return key_; }

  /// Marks of column r, 1 <= r <= columns().
  [[nodiscard]] std::span<const double> column(int r) const;
  [[nodiscard]] std::size_t total_marks() const;

  friend bool operator==(const MarkField& a, const MarkField& b) {
    return a.horizon_ == b.horizon_ && a.cols_ == b.cols_;
  }

 private:
  double horizon_ = 0.0;
  std::vector<std::vector<double>> cols_;
  StreamKey key_{};
};

/// Marks of one column: cumulative Exp(1) gaps truncated at t.
std::vector<double> generate_column(const StreamKey& column_key, double t);

/// Field for columns 1..k; column r uses `key.with_column(r)`.
MarkField generate_marks(const StreamKey& key, double t, int k);

/// Time-space reversal at the field's horizon: output column r holds
/// {t - q : q a mark of input column k-r+1, q < t}, increasing.
MarkField reverse_field(const MarkField& field);

/// Little-endian binary layout: f64 t, u64 k, u64 count[k], then f64 times
/// column by column.
void dump_field(const MarkField& field, std::ostream& os);
MarkField load_field(std::istream& is);
void dump_field(const MarkField& field, const std::filesystem::path& path);
MarkField load_field(const std::filesystem::path& path);

}  // namespace bdlab
