#include "bdlab/mark_field.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "bdlab/ext_int.hpp"

namespace bdlab {

MarkField::MarkField(double horizon, std::vector<std::vector<double>> columns, StreamKey key)
    : horizon_(horizon), cols_(std::move(columns)), key_(key) {
  if (!(horizon_ > 0.0)) throw UsageError("MarkField: horizon must be > 0");
  if (cols_.empty()) throw UsageError("MarkField: need at least one column");
  for (std::size_t r = 0; r < cols_.size(); ++r) {
    double prev = 0.0;
    for (double q : cols_[r]) {
      if (!(q > prev) || q > horizon_) {
        throw UsageError("MarkField: column " + std::to_string(r + 1) +
                         " times must be strictly increasing in (0, t]");
      }
      prev = q;
    }
  }
}

std::span<const double> MarkField::column(int r) const {
  if (r < 1 || r > columns()) throw UsageError("MarkField: column index out of range");
  return cols_[static_cast<std::size_t>(r - 1)];
}

std::size_t MarkField::total_marks() const {
  std::size_t n = 0;
  for (const auto& c : cols_) n += c.size();
  return n;
}

std::vector<double> generate_column(const StreamKey& column_key, double t) {
  Rng rng(column_key);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(t + 4.0 * std::sqrt(t) + 8.0));
  double s = rng.exponential();
  while (s <= t) {
    // a zero gap would break strict monotonicity; it has probability 2^-53
    if (out.empty() ? s > 0.0 : s > out.back()) out.push_back(s);
    s += rng.exponential();
  }
  return out;
}

MarkField generate_marks(const StreamKey& key, double t, int k) {
  if (!(t > 0.0)) throw UsageError("generate_marks: t must be > 0");
  if (k < 1) throw UsageError("generate_marks: k must be >= 1");
  std::vector<std::vector<double>> cols;
  cols.reserve(static_cast<std::size_t>(k));
  for (int r = 1; r <= k; ++r) cols.push_back(generate_column(key.with_column(static_cast<std::uint64_t>(r)), t));
  return MarkField(t, std::move(cols), key);
}

MarkField reverse_field(const MarkField& field) {
  const double t = field.horizon();
  const int k = field.columns();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(k));
  for (int r = 1; r <= k; ++r) {
    auto src = field.column(k - r + 1);
    auto& dst = out[static_cast<std::size_t>(r - 1)];
    dst.reserve(src.size());
    for (auto it = src.rbegin(); it != src.rend(); ++it) {
      if (*it >= t) continue;
      const double y = t - *it;
      if (y > 0.0 && (dst.empty() || y > dst.back())) dst.push_back(y);
    }
  }
  return MarkField(t, std::move(out), field.key());
}

namespace {

static_assert(sizeof(double) == 8);

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw UsageError("load_field: truncated input");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double d) { put_u64(os, std::bit_cast<std::uint64_t>(d)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void dump_field(const MarkField& field, std::ostream& os) {
  put_f64(os, field.horizon());
  put_u64(os, static_cast<std::uint64_t>(field.columns()));
  for (int r = 1; r <= field.columns(); ++r) put_u64(os, field.column(r).size());
  for (int r = 1; r <= field.columns(); ++r)
    for (double q : field.column(r)) put_f64(os, q);
}

MarkField load_field(std::istream& is) {
  const double t = get_f64(is);
  const std::uint64_t k = get_u64(is);
  if (k == 0 || k > (std::uint64_t{1} << 24)) throw UsageError("load_field: bad column count");
  std::vector<std::uint64_t> counts(k);
  for (auto& c : counts) c = get_u64(is);
  std::vector<std::vector<double>> cols(k);
  for (std::uint64_t r = 0; r < k; ++r) {
    cols[r].resize(counts[r]);
    for (auto& q : cols[r]) q = get_f64(is);
  }
  return MarkField(t, std::move(cols));
}

void dump_field(const MarkField& field, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("dump_field: cannot open " + path.string());
  dump_field(field, os);
}

MarkField load_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw UsageError("load_field: cannot open " + path.string());
  return load_field(is);
}

}  // namespace bdlab
