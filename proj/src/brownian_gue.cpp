#include "bdlab/brownian_gue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdlab/ext_int.hpp"

namespace bdlab {

namespace {

void check_grid_args(double t, int k, int m) {
  if (!(t > 0.0)) throw UsageError("brownian: t must be > 0");
  if (k < 1) throw UsageError("brownian: k must be >= 1");
  if (m < 2) throw UsageError("brownian: need m >= 2 grid points");
}

}  // namespace

BrownianGrid sample_brownian_grid(const StreamKey& key, double t, int k, int m) {
  check_grid_args(t, k, m);
  BrownianGrid g{t, k, m, {}};
  const double sd = std::sqrt(t / m);
  g.values.resize(static_cast<std::size_t>(k));
  for (int r = 1; r <= k; ++r) {
    Rng rng(key.with_column(static_cast<std::uint64_t>(r)));
    auto& v = g.values[static_cast<std::size_t>(r - 1)];
    v.resize(static_cast<std::size_t>(m) + 1);
    v[0] = 0.0;
    for (int j = 1; j <= m; ++j) v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j - 1)] + sd * rng.normal();
  }
  return g;
}

double brownian_lpp(const BrownianGrid& grid) {
  check_grid_args(grid.t, grid.k, grid.m);
  const auto n = static_cast<std::size_t>(grid.m) + 1;
  std::vector<double> best(grid.values[0].begin(), grid.values[0].end());
  for (int r = 2; r <= grid.k; ++r) {
    const auto& b = grid.values[static_cast<std::size_t>(r - 1)];
    double run = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      run = std::max(run, best[i] - b[i]);
      best[i] = b[i] + run;
    }
  }
  return best.back();
}

double sample_brownian_lpp(const StreamKey& key, double t, int k, int m) {
  check_grid_args(t, k, m);
  const double sd = std::sqrt(t / m);
  const auto n = static_cast<std::size_t>(m) + 1;
  std::vector<double> best(n);
  for (int r = 1; r <= k; ++r) {
    Rng rng(key.with_column(static_cast<std::uint64_t>(r)));
    double b = 0.0;
    double run = r == 1 ? 0.0 : best[0];
    best[0] = b + run;
    for (std::size_t i = 1; i < n; ++i) {
      b += sd * rng.normal();
      run = r == 1 ? 0.0 : std::max(run, best[i] - b);
      best[i] = b + run;
    }
  }
  return best.back();
}

int select_grid_resolution(const StreamKey& key, double t, int k, int m0, int cap, std::size_t n_samples) {
  check_grid_args(t, k, m0);
  if (n_samples < 1) throw UsageError("select_grid_resolution: need samples");
  auto median = [&](int m) {
    std::vector<double> v(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) v[i] = sample_brownian_lpp(key.with_replica(i), t, k, m);
    return Ecdf(std::move(v)).quantile(0.5);
  };
  double prev = median(m0);
  for (int m = 2 * m0; m <= cap; m *= 2) {
    const double cur = median(m);
    if (std::fabs(cur - prev) < 0.005 * std::sqrt(t)) return m;
    prev = cur;
  }
  return cap;
}

double tridiagonal_lambda_max(std::span<const double> diag, std::span<const double> off, double tol) {
  const std::size_t n = diag.size();
  if (n == 0) throw UsageError("tridiagonal_lambda_max: empty matrix");
  if (off.size() + 1 != n) throw UsageError("tridiagonal_lambda_max: off-diagonal length must be n-1");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::fabs(off[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double pivmin = std::numeric_limits<double>::min() * 4.0;
  // number of eigenvalues strictly below x
  auto below = [&](double x) {
    std::size_t count = 0;
    double d = diag[0] - x;
    if (std::fabs(d) < pivmin) d = -pivmin;
    count += d < 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      d = diag[i] - x - off[i - 1] * off[i - 1] / d;
      if (std::fabs(d) < pivmin) d = -pivmin;
      count += d < 0.0;
    }
    return count;
  };
  lo -= tol;
  hi += tol;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (below(mid) == n ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

GueSample sample_gue_lambda_max(const StreamKey& key, int k) {
  if (k < 1) throw UsageError("sample_gue_lambda_max: k must be >= 1");
  Rng rng(key.aux(0));
  std::vector<double> diag(static_cast<std::size_t>(k)), off(static_cast<std::size_t>(k - 1));
  for (auto& d : diag) d = rng.normal();
  for (int i = 1; i < k; ++i) off[static_cast<std::size_t>(i - 1)] = std::sqrt(rng.gamma(static_cast<double>(k - i)));
  return {k, tridiagonal_lambda_max(diag, off)};
}

KsResult brownian_scaling_check(const StreamKey& key, double t, int k, int m, std::size_t n_samples,
                                double significance) {
  if (n_samples < 2) throw UsageError("brownian_scaling_check: need n_samples >= 2");
  std::vector<double> a(n_samples), b(n_samples);
  const double root = std::sqrt(t);
  for (std::size_t i = 0; i < n_samples; ++i) {
    a[i] = sample_brownian_lpp(key.with_replica(2 * i), t, k, m);
    b[i] = root * sample_brownian_lpp(key.with_replica(2 * i + 1), 1.0, k, m);
  }
  return ks_two_sample(a, b, significance);
}

}  // namespace bdlab
