#include "qutel/protection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qutel {

namespace detail {

void require_strength(double value, const char* name) {
  if (!(value >= 0.0 && value < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1), got " +
                                std::to_string(value));
  }
}

}  // namespace detail

namespace {

void require_wm(const WMStrength& wm) {
  detail::require_strength(wm.p1, "p1");
  detail::require_strength(wm.p2, "p2");
}

void require_qmr(const QMRStrength& qmr) {
  detail::require_strength(qmr.q1, "q1");
  detail::require_strength(qmr.q2, "q2");
}

}  // namespace

Matrix wm_operator(const WMStrength& wm) {
  require_wm(wm);
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = std::sqrt(1.0 - wm.p1);
  m(2, 2) = std::sqrt(1.0 - wm.p2);
  return m;
}

std::pair<Matrix, Matrix> wm_povm_mates(const WMStrength& wm) {
  require_wm(wm);
  Matrix m1 = Matrix::Zero(3, 3);
  m1(1, 1) = std::sqrt(wm.p1);
  Matrix m2 = Matrix::Zero(3, 3);
  m2(2, 2) = std::sqrt(wm.p2);
  return {m1, m2};
}

Matrix qmr_operator(const QMRStrength& qmr) {
  require_qmr(qmr);
  Matrix r = Matrix::Zero(3, 3);
  r(0, 0) = std::sqrt((1.0 - qmr.q1) * (1.0 - qmr.q2));
  r(1, 1) = std::sqrt(1.0 - qmr.q2);
  r(2, 2) = std::sqrt(1.0 - qmr.q1);
  return r;
}

Matrix trit_flip() {
  Matrix f = Matrix::Zero(3, 3);
  f(1, 0) = 1.0;
  f(2, 1) = 1.0;
  f(0, 2) = 1.0;
  return f;
}

Matrix qmr_factored(const QMRStrength& qmr) {
  const Matrix f = trit_flip();
  const Matrix m = wm_operator({qmr.q1, qmr.q2});
  return f * m * f * m * f;
}

Matrix resource_matrix(const ResourceElements& e) {
  // Flat |j,k> -> 3j+k: |01> = 1, |02> = 2, |10> = 3, |11> = 4, |20> = 6, |22> = 8.
  Matrix rho = Matrix::Zero(9, 9);
  rho(0, 0) = e.pop00;
  rho(1, 1) = e.pop01;
  rho(2, 2) = e.pop02;
  rho(3, 3) = e.pop10;
  rho(4, 4) = e.pop11;
  rho(6, 6) = e.pop20;
  rho(8, 8) = e.pop22;
  rho(0, 4) = rho(4, 0) = e.coh00_11;
  rho(0, 8) = rho(8, 0) = e.coh00_22;
  rho(4, 8) = rho(8, 4) = e.coh11_22;
  return rho;
}

ResourceElements wm_resource_elements(const ChannelSpec& spec, const WMStrength& wm,
                                      const QMRStrength& qmr) {
  detail::require_channel(spec);
  require_wm(wm);
  require_qmr(qmr);

  const double mu = spec.mu, mub = 1.0 - spec.mu;
  const double d1 = spec.damping.d1, d2 = spec.damping.d2;
  const double db1 = 1.0 - d1, db2 = 1.0 - d2;
  const double pb1 = 1.0 - wm.p1, pb2 = 1.0 - wm.p2;
  const double qb1 = 1.0 - qmr.q1, qb2 = 1.0 - qmr.q2;

  ResourceElements e;
  e.pop00 = qb1 * qb1 * qb2 * qb2 *
            (1.0 + (mub * d1 * d1 + mu * d1) * pb1 * pb1 +
             (mub * d2 * d2 + mu * d2) * pb2 * pb2) / 3.0;
  e.pop01 = e.pop10 = mub * d1 * db1 * pb1 * pb1 * qb1 * qb2 * qb2 / 3.0;
  e.pop02 = e.pop20 = mub * d2 * db2 * pb2 * pb2 * qb1 * qb1 * qb2 / 3.0;
  e.pop11 = (mub * db1 * db1 + mu * db1) * pb1 * pb1 * qb2 * qb2 / 3.0;
  e.pop22 = (mub * db2 * db2 + mu * db2) * pb2 * pb2 * qb1 * qb1 / 3.0;
  e.coh00_11 = (mub * db1 + mu * std::sqrt(db1)) * pb1 * qb1 * qb2 * qb2 / 3.0;
  e.coh00_22 = (mub * db2 + mu * std::sqrt(db2)) * pb2 * qb1 * qb1 * qb2 / 3.0;
  e.coh11_22 = (mub * db1 * db2 + mu * std::sqrt(db1 * db2)) * pb1 * pb2 * qb1 * qb2 / 3.0;
  return e;
}

DensityMatrix wm_protected_resource(const ChannelSpec& spec, const WMStrength& wm,
                                    const QMRStrength& qmr) {
  return DensityMatrix(resource_matrix(wm_resource_elements(spec, wm, qmr)), false);
}

ResourceElements eam_resource_elements(const ChannelSpec& spec, const QMRStrength& qmr,
                                       Variant variant) {
  detail::require_channel(spec);
  require_qmr(qmr);

  const double mu = spec.mu, mub = 1.0 - spec.mu;
  const double db1 = 1.0 - spec.damping.d1, db2 = 1.0 - spec.damping.d2;
  const double qb1 = 1.0 - qmr.q1, qb2 = 1.0 - qmr.q2;

  // The Table variant rescales each branch by a population sum; the Operator
  // variant reproduces the no-jump pipeline exactly.
  double t1 = 1.0, t2 = 1.0;
  if (variant == Variant::Table) {
    t1 = (1.0 + db1 * db1 + db2 * db2) / 3.0;
    t2 = (1.0 + db1 + db2) / 3.0;
  }

  ResourceElements e;
  e.pop00 = qb1 * qb1 * qb2 * qb2 * (mu * t1 + mub * t2) / 3.0;
  e.pop11 = (mu * db1 * t1 + mub * db1 * db1 * t2) * qb2 * qb2 / 3.0;
  e.pop22 = (mu * db2 * t1 + mub * db2 * db2 * t2) * qb1 * qb1 / 3.0;
  e.coh00_11 = (mu * std::sqrt(db1) * t1 + mub * db1 * t2) * qb1 * qb2 * qb2 / 3.0;
  e.coh00_22 = (mu * std::sqrt(db2) * t1 + mub * db2 * t2) * qb1 * qb1 * qb2 / 3.0;
  e.coh11_22 = (mu * std::sqrt(db1 * db2) * t1 + mub * db1 * db2 * t2) * qb1 * qb2 / 3.0;
  return e;
}

DensityMatrix eam_protected_resource(const ChannelSpec& spec, const QMRStrength& qmr,
                                     Variant variant) {
  return DensityMatrix(resource_matrix(eam_resource_elements(spec, qmr, variant)), false);
}

double eam_variant_gap(const ChannelSpec& spec, const QMRStrength& qmr) {
  const Matrix a = resource_matrix(eam_resource_elements(spec, qmr, Variant::Operator));
  const Matrix b = resource_matrix(eam_resource_elements(spec, qmr, Variant::Table));
  return (a - b).cwiseAbs().maxCoeff();
}

namespace {

Matrix entangled_pair() {
  Vector phi = Vector::Zero(9);
  phi(0) = phi(4) = phi(8) = 1.0 / std::sqrt(3.0);
  return phi * phi.adjoint();
}

}  // namespace

DensityMatrix wm_resource_pipeline(const ChannelSpec& spec, const WMStrength& wm,
                                   const QMRStrength& qmr) {
  const Matrix filter = tensor(wm_operator(wm), wm_operator(wm));
  const Matrix damped =
      apply_kraus(Matrix(filter * entangled_pair() * filter.adjoint()),
                  std::span<const WeightedKrausBranch>(cad_branches(spec)));
  const Matrix reversal = tensor(qmr_operator(qmr), qmr_operator(qmr));
  return DensityMatrix(reversal * damped * reversal.adjoint(), false);
}

DensityMatrix eam_resource_pipeline(const ChannelSpec& spec, const QMRStrength& qmr) {
  detail::require_channel(spec);
  // Zero-click post-selection keeps only each branch's no-jump operator.
  const Matrix e00 = ad_pair_kraus(spec.damping).ops.front();
  const Matrix a00 = fcad_kraus(spec.damping).ops.front();
  const Matrix pair = entangled_pair();
  const Matrix kept = (1.0 - spec.mu) * e00 * pair * e00.adjoint() +
                      spec.mu * a00 * pair * a00.adjoint();
  const Matrix reversal = tensor(qmr_operator(qmr), qmr_operator(qmr));
  return DensityMatrix(reversal * kept * reversal.adjoint(), false);
}

double optimal_q_wm(double p, double d, double mu) {
  detail::require_strength(p, "p");
  detail::require_unit_interval(d, "d");
  detail::require_unit_interval(mu, "mu");
  const double db = 1.0 - d;
  return 1.0 - (1.0 - p) * ((1.0 - mu) * db + mu * std::sqrt(db));
}

QMRStrength optimal_q_wm_pair(const WMStrength& wm, const DampingParams& damping, double mu) {
  return {optimal_q_wm(wm.p1, damping.d1, mu), optimal_q_wm(wm.p2, damping.d2, mu)};
}

double optimal_q_eam(double d, double mu) {
  return optimal_q_wm(0.0, d, mu);
}

QMRStrength optimal_q_eam_pair(const DampingParams& damping, double mu) {
  return {optimal_q_eam(damping.d1, mu), optimal_q_eam(damping.d2, mu)};
}

}  // namespace qutel
