#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qutel/protection.hpp"
#include "qutel/teleport.hpp"

#include <cmath>
#include <random>

using namespace qutel;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("weak measurement operator and its discarded mates") {
  const Matrix m = wm_operator({0.75, 0.0});
  CHECK(m(0, 0).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m(1, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m(2, 2).real() == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> strength(0.0, 0.999);
  for (int trial = 0; trial < 100; ++trial) {
    const WMStrength wm{strength(rng), strength(rng)};
    const Matrix full = wm_operator(wm);
    const auto [m1, m2] = wm_povm_mates(wm);
    const Matrix sum =
        full.adjoint() * full + m1.adjoint() * m1 + m2.adjoint() * m2;
    CHECK(max_abs(sum - Matrix::Identity(3, 3)) <= 1e-15);
  }

  CHECK_THROWS_AS(wm_operator({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(wm_operator({-0.1, 0.0}), std::invalid_argument);
}

TEST_CASE("reversal operator entries and flip factorization") {
  const Matrix r = qmr_operator({0.19, 0.36});
  CHECK(r(0, 0).real() == doctest::Approx(0.72).epsilon(1e-15));
  CHECK(r(1, 1).real() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(r(2, 2).real() == doctest::Approx(0.9).epsilon(1e-15));

  const Matrix f = trit_flip();
  CHECK(max_abs(Matrix(f * f * f) - Matrix::Identity(3, 3)) == 0.0);

  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> strength(0.0, 0.999);
  for (int trial = 0; trial < 100; ++trial) {
    const QMRStrength qmr{strength(rng), strength(rng)};
    CHECK(max_abs(qmr_operator(qmr) - qmr_factored(qmr)) <= 1e-15);
  }
}

TEST_CASE("resource_matrix places populations and coherences symmetrically") {
  ResourceElements e;
  e.pop00 = 0.5;
  e.pop11 = 0.25;
  e.coh00_11 = 0.3;
  const Matrix rho = resource_matrix(e);
  CHECK(rho(0, 0).real() == 0.5);
  CHECK(rho(4, 4).real() == 0.25);
  CHECK(rho(0, 4).real() == 0.3);
  CHECK(rho(4, 0).real() == 0.3);
  CHECK(rho(0, 8) == Complex(0.0));
}

TEST_CASE("weak-measurement element table matches the operator pipeline") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> strength(0.0, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelSpec spec{{unit(rng), unit(rng)}, unit(rng)};
    const WMStrength wm{strength(rng), strength(rng)};
    const QMRStrength qmr{strength(rng), strength(rng)};
    const Matrix table = wm_protected_resource(spec, wm, qmr).mat();
    const Matrix ops = wm_resource_pipeline(spec, wm, qmr).mat();
    CHECK(max_abs(table - ops) <= 1e-12);
  }
}

TEST_CASE("bare damped resource population at zero strengths") {
  // mu = 0, d = 0.36, no filters: the |00> population is (1 + 2 d^2)/3
  const ResourceElements e = wm_resource_elements({{0.36, 0.36}, 0.0}, {}, {});
  CHECK(e.pop00 == doctest::Approx(0.4197333333333333).epsilon(1e-14));
  CHECK(e.pop01 == doctest::Approx(0.36 * 0.64 / 3.0).epsilon(1e-14));
  CHECK(e.coh00_11 == doctest::Approx(0.64 / 3.0).epsilon(1e-14));
}

TEST_CASE("environment-assisted element table matches its pipeline") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> strength(0.0, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelSpec spec{{unit(rng), unit(rng)}, unit(rng)};
    const QMRStrength qmr{strength(rng), strength(rng)};
    const Matrix table = eam_protected_resource(spec, qmr).mat();
    const Matrix ops = eam_resource_pipeline(spec, qmr).mat();
    CHECK(max_abs(table - ops) <= 1e-12);
  }
}

TEST_CASE("alternate environment-assisted table rescales each branch") {
  const ChannelSpec spec{{0.5, 0.5}, 0.5};
  const QMRStrength qmr{0.2, 0.2};
  const ResourceElements table = eam_resource_elements(spec, qmr, Variant::Table);

  // independent recomputation with explicit branch factors
  const double t1 = (1.0 + 0.25 + 0.25) / 3.0;
  const double t2 = (1.0 + 0.5 + 0.5) / 3.0;
  const double qb = 0.8;
  const double expected_coh11_22 =
      (0.5 * 0.5 * t1 + 0.5 * 0.25 * t2) * qb * qb / 3.0;
  CHECK(table.coh11_22 == doctest::Approx(expected_coh11_22).epsilon(1e-14));
  const double expected_pop00 = qb * qb * qb * qb * (0.5 * t1 + 0.5 * t2) / 3.0;
  CHECK(table.pop00 == doctest::Approx(expected_pop00).epsilon(1e-14));

  CHECK(eam_variant_gap(spec, qmr) > 1e-3);
  CHECK(eam_variant_gap({{0.0, 0.0}, 0.5}, qmr) <= 1e-15);
}

TEST_CASE("filter success probability does not grow with measurement strength") {
  const ChannelSpec spec{{0.4, 0.4}, 0.3};
  const QMRStrength qmr{0.2, 0.2};
  double previous = 2.0;
  for (int k = 0; k <= 20; ++k) {
    const double p = 0.95 * k / 20.0;
    const double trace = wm_protected_resource(spec, {p, p}, qmr).trace();
    CHECK(trace <= previous + 1e-14);
    previous = trace;
  }
}

TEST_CASE("extreme correlation is fully reversed at the matched strength") {
  const Vector phi = resource_state();
  for (double mu : {0.0, 1.0}) {
    for (double d : {0.2, 0.5, 0.8}) {
      const double q = optimal_q_eam(d, mu);
      const auto [state, weight] =
          normalize(eam_protected_resource({{d, d}, mu}, {q, q}));
      CHECK(weight > 0.0);
      CHECK(std::abs(fidelity_pure(phi, state) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("population-equalizing strengths") {
  CHECK(optimal_q_wm(0.5, 0.64, 1.0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(optimal_q_eam(0.75, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double mu = i / 20.0;
      const double d = j / 20.0;
      CHECK(std::abs(optimal_q_eam(d, mu) - optimal_q_wm(0.0, d, mu)) <= 1e-15);
    }
  }

  const QMRStrength pair = optimal_q_wm_pair({0.5, 0.0}, {0.64, 0.75}, 1.0);
  CHECK(pair.q1 == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(pair.q2 == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(optimal_q_wm(1.0, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(optimal_q_wm(0.5, 1.5, 0.5), std::invalid_argument);
}
