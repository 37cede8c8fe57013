#include "qutel/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qutel {

namespace {

double hermitian_residual(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.compute((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix mat, bool normalized)
    : mat_(std::move(mat)), normalized_(normalized) {
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
    throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
  }
  const double herm = hermitian_residual(mat_);
  if (herm > kHermitianTol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian, residual " + std::to_string(herm));
  }
  const double lam = min_eigenvalue(mat_);
  if (lam < kEigenvalueFloor) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(lam));
  }
  if (normalized_) {
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > kUnitTraceTol) {
      throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) +
                                  " flagged as normalized");
    }
  }
}

std::pair<DensityMatrix, double> normalize(const DensityMatrix& rho) {
  const double weight = rho.trace();
  if (weight < 1e-300) {
    throw std::runtime_error("normalize: trace too small (" + std::to_string(weight) + ")");
  }
  return {DensityMatrix(rho.mat() / weight, true), weight};
}

Matrix apply_kraus(const Matrix& rho, std::span<const Matrix> ops) {
  if (ops.empty()) {
    throw std::invalid_argument("apply_kraus: empty operator set");
  }
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& k : ops) {
    if (k.cols() != rho.rows()) {
      throw std::invalid_argument("apply_kraus: operator shape mismatch");
    }
    out += k * rho * k.adjoint();
  }
  return out;
}

Matrix partial_trace(const Matrix& rho, int keep) {
  if (rho.rows() != 9 || rho.cols() != 9) {
    throw std::invalid_argument("partial_trace: expected a 9x9 two-qutrit state");
  }
  if (keep != 1 && keep != 2) {
    throw std::invalid_argument("partial_trace: keep must be 1 or 2");
  }
  Matrix out = Matrix::Zero(3, 3);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      Complex sum = 0.0;
      for (int c = 0; c < 3; ++c) {
        // flat index |j,k> -> 3j+k; trace out the factor not kept
        const int row = (keep == 1) ? 3 * a + c : 3 * c + a;
        const int col = (keep == 1) ? 3 * b + c : 3 * c + b;
        sum += rho(row, col);
      }
      out(a, b) = sum;
    }
  }
  return out;
}

double fidelity_pure(const Vector& psi, const DensityMatrix& rho) {
  if (psi.size() != rho.dim()) {
    throw std::invalid_argument("fidelity_pure: dimension mismatch");
  }
  if (std::abs(psi.norm() - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("fidelity_pure: psi is not a unit vector");
  }
  if (!rho.is_normalized()) {
    throw std::invalid_argument("fidelity_pure: rho must be normalized");
  }
  const Complex value = psi.dot(rho.mat() * psi);
  if (std::abs(value.imag()) > kHermitianTol) {
    throw std::runtime_error("fidelity_pure: imaginary residue " + std::to_string(value.imag()));
  }
  return value.real();
}

}  // namespace qutel
