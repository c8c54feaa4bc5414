#include "bdlab/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bdlab/brownian_gue.hpp"
#include "bdlab/lpp.hpp"

namespace bdlab {

CouplingGapSample coupled_gaps(const MarkField& field, double t, int k) {
  CouplingGapSample g;
  g.t = t;
  g.k = k;
  // column j of the seed sweep ends in column j; F takes the best of them
  const auto cols = lpp_column_values(field, {0.0, 1}, {t, k});
  g.h_seed = cols.back();
  g.h_flat = ExtInt::neg_inf();
  for (auto v : cols) g.h_flat = max(g.h_flat, v);
  g.l_value = auxiliary_lpp_columnwise(field, t, k);
  g.gap_lf = g.l_value - g.h_flat.value();
  if (g.h_seed.is_finite()) g.gap_fs = g.h_flat.value() - g.h_seed.value();
  return g;
}

double aux_tail_bound(double t, int k, double x, double c_prefactor) {
  if (!(t > 0.0) || k < 1 || !(x >= 1.0)) throw UsageError("aux_tail_bound: need t > 0, k >= 1, x >= 1");
  if (x < t) throw DomainError("aux_tail_bound: the bound needs x >= t");
  const double kk = static_cast<double>(k);
  return c_prefactor * std::exp(x * (std::log((kk + x) * t / (x * x)) + 2.0) - t);
}

ParabolaValue parabola_inequality(double t, int alpha, double gamma, double s) {
  if (!(t > 0.0) || alpha < 1) throw UsageError("parabola_inequality: need t > 0 and alpha >= 1");
  if (!(gamma > 2.0 / 3.0 && gamma < 1.0)) throw DomainError("parabola_inequality: gamma must lie in (2/3, 1)");
  const double a = static_cast<double>(alpha);
  const double s_max = t * (1.0 - std::pow(a, gamma - 1.0));
  if (!(s >= 0.0 && s <= s_max)) throw DomainError("parabola_inequality: s outside [0, t(1 - alpha^(gamma-1))]");
  ParabolaValue p;
  p.k_s = std::min(alpha, static_cast<int>(std::floor(s / t * a + std::pow(a, gamma))));
  const double ks = p.k_s;
  p.lhs = std::sqrt(s * ks) + std::sqrt((t - s) * (a - ks)) - std::sqrt(t * a);
  p.rhs = -std::sqrt(t * std::pow(a, -1.0 / 3.0)) * std::pow(a, 2.0 * (gamma - 2.0 / 3.0)) / 32.0;
  p.holds = p.lhs <= p.rhs;
  return p;
}

KsResult l_vs_d_distance(const StreamKey& key, double t, int k, std::size_t n_samples, int m_grid,
                         double significance) {
  if (n_samples < 2) throw UsageError("l_vs_d_distance: need n_samples >= 2");
  std::vector<double> l(n_samples), d(n_samples);
  const double root = std::sqrt(t);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto field = generate_marks(key.with_replica(2 * i), t, k);
    l[i] = (static_cast<double>(auxiliary_lpp_columnwise(field, t, k)) - t) / root;
    d[i] = sample_brownian_lpp(key.with_replica(2 * i + 1), 1.0, k, m_grid);
  }
  return ks_two_sample(l, d, significance);
}

}  // namespace bdlab
