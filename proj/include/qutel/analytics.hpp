#pragma once

#include "qutel/protection.hpp"
#include "qutel/teleport.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace qutel {

enum class Scheme {
  None,  // unprotected damping only
  WM,    // weak measurement + reversal
  EAM,   // environment measurement + reversal
};

// Coefficients of the teleportation fidelity as a function of the input:
//   F = A1 + (ab + ac + bc)(A2 + A3 - 2 A1)
// with (a, b, c) the input populations.  A1 is the fidelity in the
// peaked-input limit, A2 the leaked-population share, A3 the coherence share.
// B1 is the coherence share relative to the diagonal populations only; it
// coincides with A3 when no population leaks outside |00>, |11>, |22>.
struct FidelityTerms {
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
  double B1 = 0.0;
};

FidelityTerms fidelity_terms(const ResourceElements& elements);
FidelityTerms fidelity_terms_wm(double mu, double d, double p, double q);
FidelityTerms fidelity_terms_eam(double mu, double d, double q,
                                 Variant variant = Variant::Operator);

// Pointwise teleportation fidelity for one input state.
double fidelity_wm(const InputAngles& angles, double mu, double d, double p, double q);
double fidelity_eam(const InputAngles& angles, double mu, double d, double q,
                    Variant variant = Variant::Operator);

// Average fidelity over the input-state family; closed form (1 + A1 + A3)/4.
double avg_fidelity_wm(double mu, double d, double p, double q);
double avg_fidelity_eam(double mu, double d, double q, Variant variant = Variant::Operator);

// Success probability (resource trace) at the given strengths.
double success_prob_wm(double mu, double d, double p, double q);
double success_prob_eam(double mu, double d, double q, Variant variant = Variant::Operator);

// Closed forms at the population-equalizing reversal strength.  The Operator
// variant is algebraically consistent with the element tables; the Table
// variant evaluates the alternate fixed expressions kept for comparison.
// The (mu = 0, d = 1) corner is a removable 0/0 and is filled with its
// directional limit along d -> 1.
double avg_fidelity_wm_opt(double mu, double d, double p, Variant variant = Variant::Operator);
double success_prob_wm_opt(double mu, double d, double p, Variant variant = Variant::Operator);
double avg_fidelity_eam_opt(double mu, double d, Variant variant = Variant::Operator);
double success_prob_eam_opt(double mu, double d, Variant variant = Variant::Operator);

// Average fidelity of teleportation through the bare damped resource.
double cad_baseline(double mu, double d);

// Trade-off measure: fidelity times success probability, environment-assisted
// minus weak-measurement, both at their optimal reversal strengths.
double balanced_improvement(double mu, double d, double p);

// Maximizes the average fidelity over the reversal strength by coarse scan
// plus golden-section refinement (absolute tolerance 1e-8, ties to smallest q).
double numeric_optimal_q(Scheme scheme, double mu, double d, double p);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

// Quadrature average of a pointwise fidelity over the input-state family,
// used as the independent oracle for the closed-form averages.
double average_fidelity_quadrature(const std::function<double(const InputAngles&)>& pointwise,
                                   int nodes_per_axis = 64);

// One row of the sweep output: both schemes evaluated side by side.
struct MeritPoint {
  double mu = 0.0;
  double d = 0.0;
  double p = 0.0;
  double q = 0.0;  // reversal strength used for the selected scheme
  Scheme scheme = Scheme::None;
  double F_cad = 0.0;
  double F_wm = 0.0;
  double F_eam = 0.0;
  double P_wm = 0.0;
  double P_eam = 0.0;
  double F_imp = 0.0;
  double eq21_discrepancy = 0.0;
};

// Evaluates one parameter point.  Without an explicit q each scheme uses its
// own optimal strength; with one, both schemes are evaluated at that q.
MeritPoint merit_point(double mu, double d, double p, Scheme scheme,
                       std::optional<double> q_explicit = std::nullopt,
                       Variant variant = Variant::Operator);

// Scheme-selected fidelity and success probability of a merit point.
double selected_fidelity(const MeritPoint& point);
double selected_probability(const MeritPoint& point);

}  // namespace qutel
