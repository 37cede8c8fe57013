#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qutel/channels.hpp"

#include <cmath>
#include <random>

using namespace qutel;

namespace {

Matrix random_density(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = Complex(gauss(rng), gauss(rng));
    }
  }
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("single-qutrit damping operators have the stated entries") {
  const KrausSet set = ad_kraus({0.36, 0.64});
  REQUIRE(set.ops.size() == 3);

  const Matrix& e0 = set.ops[0];
  CHECK(e0(0, 0).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e0(1, 1).real() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(e0(2, 2).real() == doctest::Approx(0.6).epsilon(1e-15));

  CHECK(set.ops[1](0, 1).real() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(set.ops[2](0, 2).real() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(completeness_residual(set) <= 1e-15);

  CHECK_THROWS_AS(ad_kraus({-0.1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(ad_kraus({0.1, 1.5}), std::invalid_argument);
}

TEST_CASE("pairwise and fully correlated sets are complete") {
  const DampingParams damping{0.3, 0.7};
  CHECK(ad_pair_kraus(damping).ops.size() == 9);
  CHECK(completeness_residual(ad_pair_kraus(damping)) <= 1e-15);
  CHECK(completeness_residual(fcad_kraus(damping)) <= 1e-15);
}

TEST_CASE("fully correlated damping touches only |11> and |22>") {
  const KrausSet set = fcad_kraus({0.36, 0.64});
  const Matrix& a0 = set.ops[0];
  for (int i = 0; i < 9; ++i) {
    const double expected = (i == 4) ? 0.8 : (i == 8) ? 0.6 : 1.0;
    CHECK(a0(i, i).real() == doctest::Approx(expected).epsilon(1e-15));
  }
  CHECK(set.ops[1](0, 4).real() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(set.ops[2](0, 8).real() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(max_abs(set.ops[1]) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(max_abs(set.ops[2]) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("decay probabilities from rates") {
  const DampingParams half = damping_from_rates(1.0, 1.0, std::log(2.0));
  CHECK(half.d1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(half.d2 == doctest::Approx(0.5).epsilon(1e-14));

  const DampingParams saturated = damping_from_rates(1.0, 1.0, 50.0);
  CHECK(saturated.d1 >= 1.0 - 1e-20);
  CHECK(saturated.d2 >= 1.0 - 1e-20);

  CHECK_THROWS_AS(damping_from_rates(-1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("correlated channel branches carry weights and labels") {
  const auto branches = cad_branches({{0.2, 0.5}, 0.3});
  REQUIRE(branches.size() == 2);
  CHECK(branches[0].weight == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(branches[1].weight == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(branches[0].set.label == "amplitude-damping-pair");
  CHECK(branches[1].set.label == "fully-correlated-damping");
}

TEST_CASE("correlated channel is linear in the correlation weight") {
  std::mt19937_64 rng(21);
  const Matrix rho = random_density(rng, 9);
  const DampingParams damping{0.45, 0.25};
  const DensityMatrix state(rho, true);

  const Matrix at0 = cad_apply(state, {damping, 0.0}).mat();
  const Matrix at1 = cad_apply(state, {damping, 1.0}).mat();
  for (double mu : {0.25, 0.5, 0.8}) {
    const Matrix blended = cad_apply(state, {damping, mu}).mat();
    CHECK(max_abs(blended - ((1.0 - mu) * at0 + mu * at1)) <= 1e-14);
  }
}

TEST_CASE("the double ground state is a fixed point") {
  Matrix ground = Matrix::Zero(9, 9);
  ground(0, 0) = 1.0;
  const DensityMatrix state(ground, true);
  const Matrix out = cad_apply(state, {{0.9, 0.4}, 0.6}).mat();
  CHECK(max_abs(out - ground) <= 1e-14);
}

TEST_CASE("zero correlation factorizes into independent damping") {
  std::mt19937_64 rng(22);
  const DampingParams damping{0.35, 0.55};
  const KrausSet single = ad_kraus(damping);

  const Matrix a = random_density(rng, 3);
  const Matrix b = random_density(rng, 3);
  const Matrix joint = cad_apply(DensityMatrix(tensor(a, b), true), {damping, 0.0}).mat();

  const Matrix a_damped = apply_kraus(a, std::span<const Matrix>(single.ops));
  const Matrix b_damped = apply_kraus(b, std::span<const Matrix>(single.ops));
  CHECK(max_abs(joint - tensor(a_damped, b_damped)) <= 1e-14);
}

TEST_CASE("correlated channel preserves trace and positivity flags") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ChannelSpec spec{{unit(rng), unit(rng)}, unit(rng)};
    const DensityMatrix out = cad_apply(DensityMatrix(random_density(rng, 9), true), spec);
    CHECK(out.is_normalized());
    CHECK(std::abs(out.trace() - 1.0) <= 1e-12);
  }
}

TEST_CASE("weighted application rejects bad branches") {
  const Matrix rho = Matrix::Identity(9, 9) / 9.0;
  std::vector<WeightedKrausBranch> branches;
  CHECK_THROWS_AS(apply_kraus(rho, std::span<const WeightedKrausBranch>(branches)),
                  std::invalid_argument);
  branches.push_back({-0.5, ad_pair_kraus({0.1, 0.1})});
  CHECK_THROWS_AS(apply_kraus(rho, std::span<const WeightedKrausBranch>(branches)),
                  std::invalid_argument);
}
