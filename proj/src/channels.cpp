#include "qutel/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qutel {

namespace detail {

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                std::to_string(value));
  }
}

void require_damping(const DampingParams& damping) {
  require_unit_interval(damping.d1, "d1");
  require_unit_interval(damping.d2, "d2");
}

void require_channel(const ChannelSpec& spec) {
  require_damping(spec.damping);
  require_unit_interval(spec.mu, "mu");
}

}  // namespace detail

DampingParams damping_from_rates(double gamma10, double gamma20, double time) {
  if (gamma10 < 0.0 || gamma20 < 0.0 || time < 0.0) {
    throw std::invalid_argument("damping_from_rates: rates and time must be nonnegative");
  }
  return {1.0 - std::exp(-gamma10 * time), 1.0 - std::exp(-gamma20 * time)};
}

KrausSet ad_kraus(const DampingParams& damping) {
  detail::require_damping(damping);
  const double d1 = damping.d1;
  const double d2 = damping.d2;

  Matrix e0 = Matrix::Zero(3, 3);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - d1);
  e0(2, 2) = std::sqrt(1.0 - d2);

  Matrix e1 = Matrix::Zero(3, 3);
  e1(0, 1) = std::sqrt(d1);

  Matrix e2 = Matrix::Zero(3, 3);
  e2(0, 2) = std::sqrt(d2);

  return {{e0, e1, e2}, "amplitude-damping"};
}

KrausSet ad_pair_kraus(const DampingParams& damping) {
  const KrausSet single = ad_kraus(damping);
  KrausSet pair;
  pair.label = "amplitude-damping-pair";
  pair.ops.reserve(9);
  for (const Matrix& a : single.ops) {
    for (const Matrix& b : single.ops) {
      pair.ops.push_back(tensor(a, b));
    }
  }
  return pair;
}

KrausSet fcad_kraus(const DampingParams& damping) {
  detail::require_damping(damping);
  const double d1 = damping.d1;
  const double d2 = damping.d2;

  // Flat two-qutrit basis |j,k> -> 3j+k: |11> = 4, |22> = 8.
  Matrix a0 = Matrix::Identity(9, 9);
  a0(4, 4) = std::sqrt(1.0 - d1);
  a0(8, 8) = std::sqrt(1.0 - d2);

  Matrix a1 = Matrix::Zero(9, 9);
  a1(0, 4) = std::sqrt(d1);

  Matrix a2 = Matrix::Zero(9, 9);
  a2(0, 8) = std::sqrt(d2);

  return {{a0, a1, a2}, "fully-correlated-damping"};
}

double completeness_residual(const KrausSet& set) {
  if (set.ops.empty()) {
    throw std::invalid_argument("completeness_residual: empty operator set");
  }
  const auto n = set.ops.front().cols();
  Matrix sum = Matrix::Zero(n, n);
  for (const Matrix& k : set.ops) {
    sum += k.adjoint() * k;
  }
  return (sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

std::vector<WeightedKrausBranch> cad_branches(const ChannelSpec& spec) {
  detail::require_channel(spec);
  return {{1.0 - spec.mu, ad_pair_kraus(spec.damping)},
          {spec.mu, fcad_kraus(spec.damping)}};
}

Matrix apply_kraus(const Matrix& rho, std::span<const WeightedKrausBranch> branches) {
  if (branches.empty()) {
    throw std::invalid_argument("apply_kraus: no branches");
  }
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const WeightedKrausBranch& branch : branches) {
    if (branch.weight < 0.0) {
      throw std::invalid_argument("apply_kraus: negative branch weight");
    }
    if (branch.weight == 0.0) {
      continue;
    }
    out += branch.weight * apply_kraus(rho, std::span<const Matrix>(branch.set.ops));
  }
  return out;
}

DensityMatrix cad_apply(const DensityMatrix& rho, const ChannelSpec& spec) {
  if (rho.dim() != 9) {
    throw std::invalid_argument("cad_apply: expected a 9x9 two-qutrit state");
  }
  const auto branches = cad_branches(spec);
  return DensityMatrix(apply_kraus(rho.mat(), branches), rho.is_normalized());
}

}  // namespace qutel
