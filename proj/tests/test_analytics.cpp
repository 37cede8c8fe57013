#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qutel/analytics.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace qutel;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("frozen optimal-strength values, weak-measurement scheme") {
  // consistent-variant closed forms, pinned against an operator-level evaluation
  CHECK(avg_fidelity_wm_opt(0.5, 0.5, 0.5) ==
        doctest::Approx(0.8855023318518912).epsilon(1e-12));
  CHECK(success_prob_wm_opt(0.5, 0.5, 0.5) ==
        doctest::Approx(0.010119810918997099).epsilon(1e-12));
  CHECK(avg_fidelity_wm_opt(0.8, 0.3, 0.6) ==
        doctest::Approx(0.966663196530634).epsilon(1e-12));
  CHECK(success_prob_wm_opt(0.8, 0.3, 0.6) ==
        doctest::Approx(0.01162309733740507).epsilon(1e-12));
  CHECK(avg_fidelity_wm_opt(0.2, 0.7, 0.9) ==
        doctest::Approx(0.9436058051385914).epsilon(1e-12));
  CHECK(success_prob_wm_opt(0.2, 0.7, 0.9) ==
        doctest::Approx(1.6737656476835412e-06).epsilon(1e-9));
}

TEST_CASE("frozen optimal-strength values, environment-assisted scheme") {
  CHECK(avg_fidelity_eam_opt(0.5, 0.5) ==
        doctest::Approx(0.9951882217636668).epsilon(1e-12));
  CHECK(success_prob_eam_opt(0.5, 0.5) ==
        doctest::Approx(0.1353016774029055).epsilon(1e-12));
  CHECK(avg_fidelity_eam_opt(0.8, 0.3) ==
        doctest::Approx(0.9992419746074797).epsilon(1e-12));
  CHECK(success_prob_eam_opt(0.8, 0.3) ==
        doctest::Approx(0.430345369196102).epsilon(1e-12));

  // the alternate printed forms differ in the fourth decimal
  CHECK(avg_fidelity_eam_opt(0.5, 0.5, Variant::Table) ==
        doctest::Approx(0.995028890026162).epsilon(1e-12));
  CHECK(avg_fidelity_eam_opt(0.8, 0.3, Variant::Table) ==
        doctest::Approx(0.9991434826790131).epsilon(1e-12));
}

TEST_CASE("frozen general-strength values") {
  CHECK(avg_fidelity_wm(0.3, 0.45, 0.35, 0.25) ==
        doctest::Approx(0.7604233985847415).epsilon(1e-12));
  CHECK(cad_baseline(1.0, 0.6) ==
        doctest::Approx(0.7774851773445586).epsilon(1e-12));
  CHECK(cad_baseline(0.0, 0.6) == doctest::Approx(0.58).epsilon(1e-12));
}

TEST_CASE("baseline boundary anchors") {
  for (double mu : {0.0, 0.25, 0.7, 1.0}) {
    CHECK(std::abs(cad_baseline(mu, 0.0) - 1.0) <= 1e-14);
    CHECK(std::abs(cad_baseline(mu, 1.0) - 0.5) <= 1e-12);
    CHECK(std::abs(avg_fidelity_wm_opt(mu, 0.0, 0.3) - 1.0) <= 1e-12);
    CHECK(std::abs(avg_fidelity_eam_opt(mu, 0.0) - 1.0) <= 1e-12);
  }
  // fully correlated or fully uncorrelated decay is exactly reversible
  for (int i = 0; i <= 100; ++i) {
    const double d = i / 100.0;
    CHECK(std::abs(avg_fidelity_eam_opt(0.0, d) - 1.0) <= 1e-10);
    CHECK(std::abs(avg_fidelity_eam_opt(1.0, d) - 1.0) <= 1e-10);
    CHECK(std::abs(success_prob_eam_opt(0.0, d) -
                   (1.0 - d) * (1.0 - d) * (1.0 - d) * (1.0 - d)) <= 1e-12);
  }
}

TEST_CASE("corner limits stay finite") {
  // mu = 0, d = 1 is a removable singularity of the optimal closed forms
  const double pbar = 0.7;
  const double f_wm = avg_fidelity_wm_opt(0.0, 1.0, 1.0 - pbar);
  const double expected =
      0.25 + (9.0 + 2.0 * pbar * pbar) /
                 (4.0 * (3.0 + 2.0 * pbar * pbar + 4.0 * pbar));
  CHECK(f_wm == doctest::Approx(expected).epsilon(1e-12));

  const double f_wm_table =
      avg_fidelity_wm_opt(0.0, 1.0, 1.0 - pbar, Variant::Table);
  const double expected_table =
      0.25 + (9.0 + 2.0 * pbar * pbar) / (4.0 * (7.0 + 2.0 * pbar * pbar));
  CHECK(f_wm_table == doctest::Approx(expected_table).epsilon(1e-12));

  CHECK(std::abs(avg_fidelity_eam_opt(0.0, 1.0) - 1.0) <= 1e-12);
  CHECK(std::abs(avg_fidelity_eam_opt(0.0, 1.0, Variant::Table) - 1.0) <= 1e-12);
  CHECK(std::abs(success_prob_wm_opt(0.0, 1.0, 0.3)) <= 1e-12);
  CHECK(std::abs(success_prob_eam_opt(0.0, 1.0)) <= 1e-12);

  // approaching along d the values converge to the filled-in limit
  CHECK(avg_fidelity_wm_opt(0.0, 1.0 - 1e-9, 0.3) ==
        doctest::Approx(avg_fidelity_wm_opt(0.0, 1.0, 0.3)).epsilon(1e-6));
}

TEST_CASE("fidelity term structure") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> strength(0.0, 0.95);
  for (int trial = 0; trial < 50; ++trial) {
    const double mu = unit(rng);
    const double d = unit(rng);
    const double p = strength(rng);
    const double q = strength(rng);

    const FidelityTerms wm = fidelity_terms_wm(mu, d, p, q);
    CHECK(std::abs(wm.A1 + wm.A2 - 1.0) <= 1e-12);

    // no population leaks outside the symmetric subspace without jumps
    const FidelityTerms eam = fidelity_terms_eam(mu, d, q);
    CHECK(std::abs(eam.A2) <= 1e-14);
    CHECK(std::abs(eam.B1 - eam.A3) <= 1e-12);

    CHECK(std::abs(avg_fidelity_wm(mu, d, p, q) -
                   (1.0 + wm.A1 + wm.A3) / 4.0) <= 1e-14);
    CHECK(std::abs(avg_fidelity_eam(mu, d, q) - (2.0 + eam.B1) / 4.0) <= 1e-14);
  }
}

TEST_CASE("pointwise fidelity properties") {
  // a peaked input (theta1 -> 0) rides only on the |00> population share
  const FidelityTerms terms = fidelity_terms_wm(0.4, 0.5, 0.2, 0.3);
  const double peaked = fidelity_wm({1e-9, kPi / 4.0, 0.0, 0.0}, 0.4, 0.5, 0.2, 0.3);
  CHECK(peaked == doctest::Approx(terms.A1).epsilon(1e-8));

  // phases do not enter the fidelity of these phase-covariant outputs
  const double f0 = fidelity_wm({0.7, 0.9, 0.0, 0.0}, 0.4, 0.5, 0.2, 0.3);
  const double f1 = fidelity_wm({0.7, 0.9, 2.1, 5.3}, 0.4, 0.5, 0.2, 0.3);
  CHECK(std::abs(f0 - f1) <= 1e-12);

  for (double theta : {0.3, 0.8, 1.4}) {
    const double f = fidelity_eam({theta, theta, 1.0, 2.0}, 0.6, 0.7, 0.35);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
  }
}

TEST_CASE("quadrature oracle confirms the closed-form averages") {
  const GaussLegendre rule = gauss_legendre(64);
  REQUIRE(rule.nodes.size() == 64);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(std::abs(wsum - 2.0) <= 1e-13);

  // the input-family density integrates to one
  const double unit_avg =
      average_fidelity_quadrature([](const InputAngles&) { return 1.0; });
  CHECK(std::abs(unit_avg - 1.0) <= 1e-12);

  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> strength(0.0, 0.95);
  for (int trial = 0; trial < 8; ++trial) {
    const double mu = unit(rng);
    const double d = unit(rng);
    const double p = strength(rng);
    const double q = strength(rng);
    const double closed = avg_fidelity_wm(mu, d, p, q);
    const double quad = average_fidelity_quadrature([&](const InputAngles& a) {
      return fidelity_wm(a, mu, d, p, q);
    });
    CHECK(std::abs(closed - quad) <= 1e-9);
  }
  for (int trial = 0; trial < 4; ++trial) {
    const double mu = unit(rng);
    const double d = unit(rng);
    const double q = strength(rng);
    const double closed = avg_fidelity_eam(mu, d, q);
    const double quad = average_fidelity_quadrature([&](const InputAngles& a) {
      return fidelity_eam(a, mu, d, q);
    });
    CHECK(std::abs(closed - quad) <= 1e-9);
  }
}

TEST_CASE("optimal closed forms agree with the general forms at q_opt") {
  std::mt19937_64 rng(63);
  std::uniform_real_distribution<double> unit(0.0, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    const double mu = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double d = unit(rng);
    const double p = unit(rng);

    const double qw = optimal_q_wm(p, d, mu);
    CHECK(std::abs(avg_fidelity_wm_opt(mu, d, p) -
                   avg_fidelity_wm(mu, d, p, qw)) <= 1e-10);
    CHECK(std::abs(success_prob_wm_opt(mu, d, p) -
                   success_prob_wm(mu, d, p, qw)) <= 1e-10);

    const double qe = optimal_q_eam(d, mu);
    CHECK(std::abs(avg_fidelity_eam_opt(mu, d) -
                   avg_fidelity_eam(mu, d, qe)) <= 1e-10);
    CHECK(std::abs(success_prob_eam_opt(mu, d) -
                   success_prob_eam(mu, d, qe)) <= 1e-10);
  }
}

TEST_CASE("balanced improvement recomposes and hits its flat-decay limit") {
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> strength(0.0, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const double mu = unit(rng);
    const double d = strength(rng);
    const double p = strength(rng);
    const double direct = balanced_improvement(mu, d, p);
    const double recomposed =
        avg_fidelity_eam_opt(mu, d) * success_prob_eam_opt(mu, d) -
        avg_fidelity_wm_opt(mu, d, p) * success_prob_wm_opt(mu, d, p);
    CHECK(std::abs(direct - recomposed) <= 1e-14);
  }
  for (double p : {0.0, 0.3, 0.9}) {
    const double pbar = 1.0 - p;
    const double expected = 1.0 - pbar * pbar * pbar * pbar;
    CHECK(balanced_improvement(0.5, 0.0, p) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("numeric search lands on the closed-form optimum") {
  // no decay, no filter: nothing to reverse
  CHECK(numeric_optimal_q(Scheme::EAM, 0.5, 0.0, 0.0) == 0.0);
  CHECK(numeric_optimal_q(Scheme::WM, 0.5, 0.0, 0.0) == 0.0);

  // uncorrelated decay is exactly reversed at q = d
  for (double d : {0.2, 0.5, 0.8}) {
    CHECK(std::abs(numeric_optimal_q(Scheme::EAM, 0.0, d, 0.0) - d) <= 1e-6);
  }
  // with no decay the weak measurement is undone at q = p
  for (double p : {0.2, 0.6}) {
    const double q = numeric_optimal_q(Scheme::WM, 0.0, 0.0, p);
    CHECK(std::abs(q - p) <= 1e-6);
  }
  // fully correlated decay at d = 0.75 equalizes at q = 0.5
  CHECK(std::abs(numeric_optimal_q(Scheme::EAM, 1.0, 0.75, 0.0) - 0.5) <= 1e-6);

  CHECK_THROWS_AS(numeric_optimal_q(Scheme::None, 0.5, 0.5, 0.0),
                  std::invalid_argument);
}

TEST_CASE("merit points carry both schemes consistently") {
  const MeritPoint optimal = merit_point(0.4, 0.5, 0.2, Scheme::WM);
  CHECK(optimal.q == doctest::Approx(optimal_q_wm(0.2, 0.5, 0.4)).epsilon(1e-14));
  CHECK(optimal.F_wm ==
        doctest::Approx(avg_fidelity_wm_opt(0.4, 0.5, 0.2)).epsilon(1e-14));
  CHECK(optimal.F_eam ==
        doctest::Approx(avg_fidelity_eam_opt(0.4, 0.5)).epsilon(1e-14));
  CHECK(optimal.P_wm ==
        doctest::Approx(success_prob_wm_opt(0.4, 0.5, 0.2)).epsilon(1e-14));
  CHECK(optimal.F_imp ==
        doctest::Approx(balanced_improvement(0.4, 0.5, 0.2)).epsilon(1e-14));
  CHECK(optimal.F_cad == doctest::Approx(cad_baseline(0.4, 0.5)).epsilon(1e-14));
  CHECK(selected_fidelity(optimal) == optimal.F_wm);
  CHECK(selected_probability(optimal) == optimal.P_wm);

  const MeritPoint fixed = merit_point(0.4, 0.5, 0.2, Scheme::EAM, 0.3);
  CHECK(fixed.q == 0.3);
  CHECK(fixed.F_eam ==
        doctest::Approx(avg_fidelity_eam(0.4, 0.5, 0.3)).epsilon(1e-14));
  CHECK(fixed.F_wm ==
        doctest::Approx(avg_fidelity_wm(0.4, 0.5, 0.2, 0.3)).epsilon(1e-14));
  CHECK(selected_fidelity(fixed) == fixed.F_eam);

  const MeritPoint none = merit_point(0.4, 0.5, 0.2, Scheme::None);
  CHECK(none.q == 0.0);
  CHECK(selected_fidelity(none) == none.F_cad);
  CHECK(selected_probability(none) == 1.0);

  // the discrepancy column reports the gap between the two variant tables
  CHECK(optimal.eq21_discrepancy >= 0.0);
  const MeritPoint clean = merit_point(0.4, 0.0, 0.2, Scheme::EAM);
  CHECK(clean.eq21_discrepancy <= 1e-15);
}
