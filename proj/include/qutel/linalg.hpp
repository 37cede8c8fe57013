#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <span>
#include <utility>

namespace qutel {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;

// Shared numerical tolerances for state validity.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr double kUnitTraceTol = 1e-12;
inline constexpr double kUnitNormTol = 1e-12;

// Kronecker product with block ordering (a_ij * b): for qutrits the basis ket
// |j,k> lands on flat index 3j+k.
template <typename DerivedA, typename DerivedB>
Matrix tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return Eigen::kroneckerProduct(a.derived(), b.derived());
}

template <typename DerivedA, typename DerivedB>
Vector tensor_state(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return Eigen::kroneckerProduct(a.derived(), b.derived());
}

// Hermitian positive-semidefinite matrix plus a flag recording whether its
// trace is meant to be 1.  Unnormalized states are first-class citizens here:
// post-selected branches carry their success probability in the trace.
// Construction validates Hermiticity, positivity and (if flagged) unit trace.
class DensityMatrix {
 public:
  DensityMatrix(Matrix mat, bool normalized);

  const Matrix& mat() const { return mat_; }
  bool is_normalized() const { return normalized_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  double trace() const { return mat_.trace().real(); }

 private:
  Matrix mat_;
  bool normalized_;
};

// Splits an unnormalized state into (unit-trace state, weight).  Throws if the
// trace is too small to divide by.
std::pair<DensityMatrix, double> normalize(const DensityMatrix& rho);

// Sum_j K_j rho K_j^dag.  The operator set need not be complete; incomplete
// sets model post-selection and shrink the trace.
Matrix apply_kraus(const Matrix& rho, std::span<const Matrix> ops);

// Partial trace of a two-qutrit state; keep = 1 retains the first factor,
// keep = 2 the second.
Matrix partial_trace(const Matrix& rho, int keep);

// <psi|rho|psi> for a unit vector psi and a normalized rho.  The imaginary
// residue must be below kHermitianTol; it is checked and dropped.
double fidelity_pure(const Vector& psi, const DensityMatrix& rho);

}  // namespace qutel
