#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "bdlab/ext_int.hpp"
#include "bdlab/mark_field.hpp"
#include "bdlab/rng.hpp"
#include "bdlab/stats.hpp"

namespace bdlab {

struct CouplingGapSample {
  double t = 0.0;
  int k = 0;
  ExtInt h_flat;
  ExtInt h_seed;
  std::int64_t l_value = 0;
  std::optional<std::int64_t> gap_fs;  // h_F - h_S; empty stands for +inf (h_S = -inf)
  std::int64_t gap_lf = 0;             // L - h_F
};

/// h_F, h_S and L on one field from a single LPP sweep and one chain sweep.
CouplingGapSample coupled_gaps(const MarkField& field, double t, int k);

/// C exp[x (log((k + x) t / x^2) + 2) - t]; DomainError unless x >= t.
double aux_tail_bound(double t, int k, double x, double c_prefactor = 10.0);

struct ParabolaValue {
  int k_s = 0;  // floor(s alpha / t + alpha^gamma)
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// lhs = sqrt(s k_s) + sqrt((t - s)(alpha - k_s)) - sqrt(t alpha),
/// rhs = -(1/32) sqrt(t alpha^(-1/3)) alpha^(2 (gamma - 2/3)).
/// DomainError unless gamma in (2/3, 1) and s in [0, t (1 - alpha^(gamma - 1))].
ParabolaValue parabola_inequality(double t, int alpha, double gamma, double s);

/// Two-sample KS between (L(t,k) - t)/sqrt(t) and D(t,k)/sqrt(t), the latter
/// sampled as D(1,k) on an m_grid grid. Replica 2i feeds the i-th L sample,
/// replica 2i+1 the i-th D sample.
KsResult l_vs_d_distance(const StreamKey& key, double t, int k, std::size_t n_samples, int m_grid,
                         double significance = kDefaultSignificance);

}  // namespace bdlab
