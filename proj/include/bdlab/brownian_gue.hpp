#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bdlab/rng.hpp"
#include "bdlab/stats.hpp"

namespace bdlab {

/// k independent Brownian motions sampled at j*t/m, j = 0..m.
struct BrownianGrid {
  double t = 0.0;
  int k = 0;
  int m = 0;
  std::vector<std::vector<double>> values;  // values[r-1][j] = B_r(j t / m), values[r-1][0] = 0

  [[nodiscard]] double at(int r, int j) const {
    return values[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(j)];
  }
};

/// Column r draws its increments from key.with_column(r).
BrownianGrid sample_brownian_grid(const StreamKey& key, double t, int k, int m);

/// Grid version of D(t, k): sup over breakpoints 0 <= s_1 <= ... <= s_{k-1} <= t
/// restricted to grid times, of sum_r B_r(s_r) - B_r(s_{r-1}).
double brownian_lpp(const BrownianGrid& grid);

/// Same value as brownian_lpp(sample_brownian_grid(key, t, k, m)) using
/// O(m) memory.
double sample_brownian_lpp(const StreamKey& key, double t, int k, int m);

/// Smallest m = m0 * 2^j <= cap whose sampled median moved by less than
/// 0.005 * sqrt(t) relative to m/2 (same keys for both sides). Returns cap
/// when no such m is found.
int select_grid_resolution(const StreamKey& key, double t, int k, int m0, int cap, std::size_t n_samples);

struct GueSample {
  int k = 0;
  double lambda_max = 0.0;
};

/// Largest eigenvalue of a k x k GUE matrix with N(0,1) diagonal and
/// off-diagonal entries (x + iy)/sqrt(2), so lambda_max(1) ~ N(0,1) and the
/// spectral edge sits at 2 sqrt(k). Sampled through the unitarily
/// equivalent real tridiagonal model: diagonal N(0,1), off-diagonal
/// sqrt(Gamma(k - i, 1)), i = 1..k-1. Uses key.aux(0).
GueSample sample_gue_lambda_max(const StreamKey& key, int k);

/// Top eigenvalue of the symmetric tridiagonal matrix (diag, off) by Sturm
/// count bisection to absolute tolerance `tol`.
double tridiagonal_lambda_max(std::span<const double> diag, std::span<const double> off, double tol = 1e-10);

/// Two-sample KS between D(t, k) and sqrt(t) D(1, k), independent grids.
KsResult brownian_scaling_check(const StreamKey& key, double t, int k, int m, std::size_t n_samples,
                                double significance = kDefaultSignificance);

}  // namespace bdlab
