#include "qutel/teleport.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qutel {

namespace {

constexpr double kPi = std::numbers::pi;

void require_angles(const InputAngles& a) {
  const auto check_theta = [](double v, const char* name) {
    if (!(v > 0.0 && v <= kPi / 2.0)) {
      throw std::invalid_argument(std::string(name) + " must lie in (0, pi/2], got " +
                                  std::to_string(v));
    }
  };
  const auto check_phi = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 2.0 * kPi)) {
      throw std::invalid_argument(std::string(name) + " must lie in [0, 2pi], got " +
                                  std::to_string(v));
    }
  };
  check_theta(a.theta1, "theta1");
  check_theta(a.theta2, "theta2");
  check_phi(a.phi1, "phi1");
  check_phi(a.phi2, "phi2");
}

Complex omega_power(int k) {
  const double arg = 2.0 * kPi * static_cast<double>(((k % 3) + 3) % 3) / 3.0;
  return {std::cos(arg), std::sin(arg)};
}

Gates build_gates() {
  Gates g;
  g.hadamard = Matrix::Zero(3, 3);
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      g.hadamard(n, m) = omega_power(m * n) / std::sqrt(3.0);
    }
  }
  g.shift = Matrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) {
    g.shift((k + 1) % 3, k) = 1.0;
  }
  g.clock = Matrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) {
    g.clock(k, k) = omega_power(k);
  }
  g.controlled_sub = Matrix::Zero(9, 9);
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      g.controlled_sub(3 * m + ((n - m + 3) % 3), 3 * m + n) = 1.0;
    }
  }
  return g;
}

Matrix matrix_power(const Matrix& m, int k) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) {
    out = m * out;
  }
  return out;
}

}  // namespace

Vector input_state(const InputAngles& angles) {
  require_angles(angles);
  Vector psi(3);
  psi(0) = std::cos(angles.theta1);
  psi(1) = std::sin(angles.theta1) * std::cos(angles.theta2) *
           Complex(std::cos(angles.phi1), std::sin(angles.phi1));
  psi(2) = std::sin(angles.theta1) * std::sin(angles.theta2) *
           Complex(std::cos(angles.phi2), std::sin(angles.phi2));
  return psi;
}

Vector resource_state() {
  Vector phi = Vector::Zero(9);
  phi(0) = phi(4) = phi(8) = 1.0 / std::sqrt(3.0);
  return phi;
}

const Gates& gates() {
  static const Gates g = build_gates();
  return g;
}

Matrix correction(int m, int n) {
  if (m < 0 || m > 2 || n < 0 || n > 2) {
    throw std::invalid_argument("correction: outcome labels must lie in {0, 1, 2}");
  }
  const Gates& g = gates();
  return matrix_power(g.clock, (3 - m) % 3) * matrix_power(g.shift, (3 - n) % 3);
}

TeleportReport teleport_circuit(const Vector& psi, const DensityMatrix& shared,
                                bool normalize_shared) {
  if (psi.size() != 3) {
    throw std::invalid_argument("teleport_circuit: psi must be a single qutrit");
  }
  if (std::abs(psi.norm() - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("teleport_circuit: psi is not a unit vector");
  }
  if (shared.dim() != 9) {
    throw std::invalid_argument("teleport_circuit: shared state must be two qutrits");
  }

  double success = 1.0;
  Matrix pair = shared.mat();
  if (!shared.is_normalized()) {
    if (!normalize_shared) {
      throw std::invalid_argument(
          "teleport_circuit: shared state is unnormalized; pass normalize_shared = true");
    }
    auto [unit, weight] = normalize(shared);
    pair = unit.mat();
    success = weight;
  }

  const Gates& g = gates();
  const Matrix id3 = Matrix::Identity(3, 3);
  const Matrix id9 = Matrix::Identity(9, 9);
  // Alice entangles her two qutrits (the input and her half of the pair),
  // then rotates the control into the measurement basis.
  const Matrix unitary = tensor(g.hadamard, id9) * tensor(g.controlled_sub, id3);

  Matrix rho = tensor(Matrix(psi * psi.adjoint()), pair);
  rho = unitary * rho * unitary.adjoint();

  std::vector<TeleportOutcome> outcomes;
  outcomes.reserve(9);
  Matrix average = Matrix::Zero(3, 3);
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 3; ++n) {
      Matrix block(3, 3);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          block(i, j) = rho(9 * m + 3 * n + i, 9 * m + 3 * n + j);
        }
      }
      const double prob = block.trace().real();
      if (prob < 1e-300) {
        throw std::runtime_error("teleport_circuit: vanishing outcome probability");
      }
      const Matrix fix = correction(m, n);
      const Matrix state = (fix * block * fix.adjoint()) / prob;
      outcomes.push_back(TeleportOutcome{m, n, prob, DensityMatrix(state, true)});
      average += prob * state;
    }
  }
  return TeleportReport{std::move(outcomes), DensityMatrix(average, true), success};
}

DensityMatrix output_from_elements(const InputAngles& angles, const ResourceElements& e) {
  const Vector psi = input_state(angles);
  const double wa = std::norm(psi(0));
  const double wb = std::norm(psi(1));
  const double wc = std::norm(psi(2));

  const double s0 = e.pop00 + e.pop11 + e.pop22;
  const double s1 = e.pop02 + e.pop10;
  const double s2 = e.pop01 + e.pop20;
  const double coh = e.coh00_11 + e.coh00_22 + e.coh11_22;
  const double total = s0 + s1 + s2;
  if (total < 1e-300) {
    throw std::runtime_error("output_from_elements: resource has vanishing trace");
  }

  Matrix out(3, 3);
  out(0, 0) = s0 * wa + s1 * wb + s2 * wc;
  out(1, 1) = s2 * wa + s0 * wb + s1 * wc;
  out(2, 2) = s1 * wa + s2 * wb + s0 * wc;
  out(0, 1) = coh * psi(0) * std::conj(psi(1));
  out(0, 2) = coh * psi(0) * std::conj(psi(2));
  out(1, 2) = coh * psi(1) * std::conj(psi(2));
  out(1, 0) = std::conj(out(0, 1));
  out(2, 0) = std::conj(out(0, 2));
  out(2, 1) = std::conj(out(1, 2));
  return DensityMatrix(out / total, true);
}

DensityMatrix output_closed_form_wm(const InputAngles& angles, const ChannelSpec& spec,
                                    const WMStrength& wm, const QMRStrength& qmr) {
  return output_from_elements(angles, wm_resource_elements(spec, wm, qmr));
}

DensityMatrix output_closed_form_eam(const InputAngles& angles, const ChannelSpec& spec,
                                     const QMRStrength& qmr, Variant variant) {
  return output_from_elements(angles, eam_resource_elements(spec, qmr, variant));
}

}  // namespace qutel
