#pragma once

#include "qutel/linalg.hpp"

#include <string>
#include <vector>

namespace qutel {

// Decay probabilities of the two excited qutrit levels, d_i in [0, 1].
struct DampingParams {
  double d1 = 0.0;
  double d2 = 0.0;
};

// Two-qutrit correlated damping channel: with probability (1 - mu) the qutrits
// decay independently, with probability mu they decay fully correlated.
struct ChannelSpec {
  DampingParams damping;
  double mu = 0.0;
};

struct KrausSet {
  std::vector<Matrix> ops;
  std::string label;
};

struct WeightedKrausBranch {
  double weight = 1.0;
  KrausSet set;
};

// d_i = 1 - exp(-gamma_i0 * t).
DampingParams damping_from_rates(double gamma10, double gamma20, double time);

// Single-qutrit amplitude damping: a no-jump operator plus one jump operator
// per excited level.
KrausSet ad_kraus(const DampingParams& damping);

// The nine pairwise products E_i (x) E_j acting on two qutrits.
KrausSet ad_pair_kraus(const DampingParams& damping);

// Fully correlated damping on two qutrits: both decay together or not at all,
// so only |11> and |22> are touched.
KrausSet fcad_kraus(const DampingParams& damping);

// || sum_j K_j^dag K_j - I ||_inf, zero for a complete set.
double completeness_residual(const KrausSet& set);

// The two weighted branches of the correlated channel, kept separate so that
// callers can post-select on individual branches.
std::vector<WeightedKrausBranch> cad_branches(const ChannelSpec& spec);

// sum_b w_b sum_j K_j rho K_j^dag over weighted branches.
Matrix apply_kraus(const Matrix& rho, std::span<const WeightedKrausBranch> branches);

// Applies the correlated damping channel; trace and normalization flag are
// preserved because the channel is trace preserving.
DensityMatrix cad_apply(const DensityMatrix& rho, const ChannelSpec& spec);

namespace detail {
void require_unit_interval(double value, const char* name);
void require_damping(const DampingParams& damping);
void require_channel(const ChannelSpec& spec);
}  // namespace detail

}  // namespace qutel
