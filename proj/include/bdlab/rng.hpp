#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bdlab {

/// Identity of one independent random stream.
///
/// Streams are derived by hashing the key fields (no shared generator state),
/// so any replica or column can be regenerated in isolation and results do
/// not depend on thread scheduling. Columns >= 1 carry Poisson marks; other
/// draws belonging to a replica use `aux(n)`, which maps into a reserved
/// column range.
struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint32_t experiment_id = 0;
  std::uint64_t replica = 0;
  std::uint64_t column = 1;

  static constexpr std::uint64_t kAuxBase = std::uint64_t{1} << 40;

  [[nodiscard]] StreamKey with_column(std::uint64_t c) const {
    StreamKey k = *this;
    k.column = c;
    return k;
  }
  [[nodiscard]] StreamKey with_replica(std::uint64_t r) const {
    StreamKey k = *this;
    k.replica = r;
    return k;
  }
  [[nodiscard]] StreamKey aux(std::uint64_t n) const { return with_column(kAuxBase + n); }

  friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// 64-bit digest of a key; distinct keys give unrelated digests.
std::uint64_t stream_digest(const StreamKey& key);

/// xoshiro256++ seeded from a StreamKey digest through splitmix64.
/// Frozen generator for the 1.x series of this library.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const StreamKey& key);
  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_pos() { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform integer in [0, n), exact (Lemire's multiply-and-reject).
  std::uint32_t below(std::uint32_t n);

  /// Standard normal (256-layer ziggurat).
  double normal();
  /// Exponential with mean 1 (256-layer ziggurat).
  double exponential();
  /// Gamma(shape, 1), shape > 0 (Marsaglia-Tsang).
  double gamma(double shape);
  /// Poisson(mean), mean >= 0 (inversion below 10, PTRS above).
  std::int64_t poisson(double mean);

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  double normal_slow(std::uint64_t r, int idx, double x);
  double exponential_slow(std::uint64_t r, int idx, double x);

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace bdlab
