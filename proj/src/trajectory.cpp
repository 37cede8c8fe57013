#include "qutel/trajectory.hpp"

#include "qutel/channels.hpp"
#include "qutel/protection.hpp"

#include <cmath>
#include <stdexcept>

namespace qutel {

namespace {

void require_amplitudes(Complex a, Complex b, Complex c) {
  const double norm2 = std::norm(a) + std::norm(b) + std::norm(c);
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("unravel: amplitudes must satisfy |a|^2+|b|^2+|c|^2 = 1");
  }
}

// Basis kets in the flat |3j+k> ordering.
Vector ket(int j, int k, Complex amplitude) {
  Vector v = Vector::Zero(9);
  v(3 * j + k) = amplitude;
  return v;
}

Vector diagonal_ket(Complex a, Complex b, Complex c) {
  Vector v = Vector::Zero(9);
  v(0) = a;
  v(4) = b;
  v(8) = c;
  return v;
}

// Amplitude scale the reversal applies to |jk>: one diagonal factor per qutrit.
void apply_reversal(std::vector<TrajectoryBranch>& branches, double q) {
  const Matrix r = qmr_operator({q, q});
  for (TrajectoryBranch& branch : branches) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        branch.system_state(3 * j + k) *= r(j, j).real() * r(k, k).real();
      }
    }
  }
}

void drop_empty(std::vector<TrajectoryBranch>& branches) {
  std::erase_if(branches,
                [](const TrajectoryBranch& b) { return b.system_state.squaredNorm() == 0.0; });
}

}  // namespace

std::vector<TrajectoryBranch> unravel_wm(Complex a, Complex b, Complex c, double mu,
                                         double d, double p, double q) {
  require_amplitudes(a, b, c);
  detail::require_unit_interval(mu, "mu");
  detail::require_unit_interval(d, "d");
  detail::require_strength(p, "p");
  detail::require_strength(q, "q");

  const double pb = 1.0 - p;
  const double db = 1.0 - d;

  // Weak measurement first: the no-click operator scales |11> and |22>.
  const Complex bw = b * pb;
  const Complex cw = c * pb;

  std::vector<TrajectoryBranch> branches;
  if (d == 0.0) {
    // Both channel halves act trivially, so the no-jump branches coincide.
    branches.push_back({diagonal_ket(a, bw, cw), 0, "no-jump"});
    apply_reversal(branches, q);
    return branches;
  }

  const double su = std::sqrt(1.0 - mu);  // uncorrelated half
  const double sc = std::sqrt(mu);        // correlated half

  branches.push_back({diagonal_ket(su * a, su * bw * db, su * cw * db), 0, "u-nojump"});
  const double single = std::sqrt(d * db);
  branches.push_back({ket(0, 1, su * bw * single), 1, "u-single-01"});
  branches.push_back({ket(1, 0, su * bw * single), 1, "u-single-10"});
  branches.push_back({ket(0, 2, su * cw * single), 1, "u-single-02"});
  branches.push_back({ket(2, 0, su * cw * single), 1, "u-single-20"});
  branches.push_back({ket(0, 0, su * bw * d), 2, "u-double-1"});
  branches.push_back({ket(0, 0, su * cw * d), 2, "u-double-2"});

  const double sdb = std::sqrt(db);
  const double sd = std::sqrt(d);
  branches.push_back({diagonal_ket(sc * a, sc * bw * sdb, sc * cw * sdb), 0, "c-nojump"});
  branches.push_back({ket(0, 0, sc * bw * sd), 2, "c-double-1"});
  branches.push_back({ket(0, 0, sc * cw * sd), 2, "c-double-2"});

  drop_empty(branches);
  apply_reversal(branches, q);
  return branches;
}

std::vector<TrajectoryBranch> unravel_eam(Complex a, Complex b, Complex c, double mu,
                                          double d, double q) {
  require_amplitudes(a, b, c);
  detail::require_unit_interval(mu, "mu");
  detail::require_unit_interval(d, "d");
  detail::require_strength(q, "q");

  const double db = 1.0 - d;

  std::vector<TrajectoryBranch> branches;
  if (d == 0.0) {
    branches.push_back({diagonal_ket(a, b, c), 0, "no-jump"});
  } else {
    const double su = std::sqrt(1.0 - mu);
    const double sc = std::sqrt(mu);
    branches.push_back({diagonal_ket(su * a, su * b * db, su * c * db), 0, "u-nojump"});
    branches.push_back({diagonal_ket(sc * a, sc * b * std::sqrt(db), sc * c * std::sqrt(db)),
                        0, "c-nojump"});
    drop_empty(branches);
  }
  apply_reversal(branches, q);
  return branches;
}

Matrix reconstruct(const std::vector<TrajectoryBranch>& branches) {
  Matrix rho = Matrix::Zero(9, 9);
  for (const TrajectoryBranch& branch : branches) {
    rho += branch.system_state * branch.system_state.adjoint();
  }
  return rho;
}

double survival_probability(const std::vector<TrajectoryBranch>& branches) {
  double total = 0.0;
  for (const TrajectoryBranch& branch : branches) {
    total += branch.system_state.squaredNorm();
  }
  return total;
}

}  // namespace qutel
