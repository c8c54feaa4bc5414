#include "bdlab/rng.hpp"

#include <cmath>

namespace bdlab {
namespace {

// Ziggurat tables for f(x) = exp(-x^2/2) and f(x) = exp(-x), 256 layers,
// after Marsaglia & Tsang, widened to 53-bit mantissas.
struct ZigguratTables {
  std::array<std::uint64_t, 256> kn{}, ke{};
  std::array<double, 256> wn{}, fn{}, we{}, fe{};

  static constexpr double kNormR = 3.6541528853610088;
  static constexpr double kNormV = 0.00492867323399;
  static constexpr double kExpR = 7.69711747013104972;
  static constexpr double kExpV = 0.0039496598225815571993;

  ZigguratTables() {
    constexpr double m = 0x1.0p53;

    double dn = kNormR, tn = dn;
    double q = kNormV / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<std::uint64_t>((dn / q) * m);
    kn[1] = 0;
    wn[0] = q / m;
    wn[255] = dn / m;
    fn[0] = 1.0;
    fn[255] = std::exp(-0.5 * dn * dn);
    for (int i = 254; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(kNormV / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<std::uint64_t>((dn / tn) * m);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / m;
    }

    double de = kExpR, te = de;
    q = kExpV / std::exp(-de);
    ke[0] = static_cast<std::uint64_t>((de / q) * m);
    ke[1] = 0;
    we[0] = q / m;
    we[255] = de / m;
    fe[0] = 1.0;
    fe[255] = std::exp(-de);
    for (int i = 254; i >= 1; --i) {
      de = -std::log(kExpV / de + std::exp(-de));
      ke[i + 1] = static_cast<std::uint64_t>((de / te) * m);
      te = de;
      fe[i] = std::exp(-de);
      we[i] = de / m;
    }
  }
};

const ZigguratTables& zig() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace

std::uint64_t stream_digest(const StreamKey& key) {
  std::uint64_t h = splitmix64(key.master_seed);
  h = splitmix64(h ^ (0x5851f42d4c957f2dULL * (std::uint64_t{key.experiment_id} + 1)));
  h = splitmix64(h ^ (0x14057b7ef767814fULL * (key.replica + 1)));
  h = splitmix64(h ^ (0xda942042e4dd58b5ULL * (key.column + 1)));
  return h;
}

Rng::Rng(const StreamKey& key) : Rng(stream_digest(key)) {}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& w : s_) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    w = z ^ (z >> 31);
  }
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint32_t Rng::below(std::uint32_t n) {
  std::uint64_t m = static_cast<std::uint64_t>(static_cast<std::uint32_t>((*this)() >> 32)) * n;
  auto low = static_cast<std::uint32_t>(m);
  if (low < n) {
    const std::uint32_t threshold = static_cast<std::uint32_t>(-n) % n;
    while (low < threshold) {
      m = static_cast<std::uint64_t>(static_cast<std::uint32_t>((*this)() >> 32)) * n;
      low = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

double Rng::normal() {
  const auto& z = zig();
  const std::uint64_t r = (*this)();
  const int idx = static_cast<int>(r & 0xff);
  const std::uint64_t rabs = r >> 11;
  double x = static_cast<double>(rabs) * z.wn[idx];
  if (r & 0x100) x = -x;
  if (rabs < z.kn[idx]) return x;
  return normal_slow(r, idx, x);
}

double Rng::normal_slow(std::uint64_t r, int idx, double x) {
  const auto& z = zig();
  for (;;) {
    if (idx == 0) {
      // tail beyond R
      double xx = 0.0, yy = 0.0;
      do {
        xx = -std::log(uniform_pos()) / ZigguratTables::kNormR;
        yy = -std::log(uniform_pos());
      } while (yy + yy < xx * xx);
      return (r & 0x100) ? -(ZigguratTables::kNormR + xx) : ZigguratTables::kNormR + xx;
    }
    if (z.fn[idx] + uniform() * (z.fn[idx - 1] - z.fn[idx]) < std::exp(-0.5 * x * x)) return x;
    r = (*this)();
    idx = static_cast<int>(r & 0xff);
    const std::uint64_t rabs = r >> 11;
    x = static_cast<double>(rabs) * z.wn[idx];
    if (r & 0x100) x = -x;
    if (rabs < z.kn[idx]) return x;
  }
}

double Rng::exponential() {
  const auto& z = zig();
  const std::uint64_t r = (*this)();
  const int idx = static_cast<int>(r & 0xff);
  const std::uint64_t rabs = r >> 11;
  const double x = static_cast<double>(rabs) * z.we[idx];
  if (rabs < z.ke[idx]) return x;
  return exponential_slow(r, idx, x);
}

double Rng::exponential_slow(std::uint64_t r, int idx, double x) {
  const auto& z = zig();
  for (;;) {
    if (idx == 0) return ZigguratTables::kExpR - std::log(uniform_pos());
    if (z.fe[idx] + uniform() * (z.fe[idx - 1] - z.fe[idx]) < std::exp(-x)) return x;
    r = (*this)();
    idx = static_cast<int>(r & 0xff);
    const std::uint64_t rabs = r >> 11;
    x = static_cast<double>(rabs) * z.we[idx];
    if (rabs < z.ke[idx]) return x;
  }
}

double Rng::gamma(double shape) {
  if (shape < 1.0) {
    // boost to shape + 1, then scale by U^(1/shape)
    return gamma(shape + 1.0) * std::pow(uniform_pos(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0, v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::int64_t Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 10.0) {
    const double limit = std::exp(-mean);
    std::int64_t n = 0;
    double prod = uniform_pos();
    while (prod > limit) {
      ++n;
      prod *= uniform_pos();
    }
    return n;
  }
  // Hormann's transformed rejection with squeeze (PTRS).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform_pos();
    const double us = 0.5 - std::fabs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(kd);
    if (kd < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + kd * loglam - std::lgamma(kd + 1.0)) {
      return static_cast<std::int64_t>(kd);
    }
  }
}

}  // namespace bdlab
