#pragma once

#include "qutel/channels.hpp"
#include "qutel/linalg.hpp"

#include <utility>

namespace qutel {

// Pre-damping weak measurement strength per excited level, p_i in [0, 1).
struct WMStrength {
  double p1 = 0.0;
  double p2 = 0.0;
};

// Post-damping measurement-reversal strength per excited level, q_i in [0, 1).
struct QMRStrength {
  double q1 = 0.0;
  double q2 = 0.0;
};

// Several closed forms exist in two flavors: the ones consistent with the
// operator pipeline, and alternate fixed-coefficient tables retained for
// comparison (selected on the CLI with --eq21-variant).
enum class Variant {
  Operator,
  Table,
};

// No-click weak measurement operator diag(1, sqrt(1-p1), sqrt(1-p2)).
Matrix wm_operator(const WMStrength& wm);

// The two discarded outcomes completing the weak measurement to a POVM.
std::pair<Matrix, Matrix> wm_povm_mates(const WMStrength& wm);

// Reversal operator diag(sqrt((1-q1)(1-q2)), sqrt(1-q2), sqrt(1-q1)).
Matrix qmr_operator(const QMRStrength& qmr);

// Cyclic shift |0> -> |1> -> |2> -> |0| as a matrix; cubes to the identity.
Matrix trit_flip();

// The reversal as a flip-conjugated pair of weak measurements:
// R = F M F M F with M = diag(1, sqrt(1-q1), sqrt(1-q2)).
Matrix qmr_factored(const QMRStrength& qmr);

// Nonzero entries of the protected resource states in the flat |3j+k> basis.
// Populations are labeled by the surviving ket, coherences by the ket pair;
// all entries are real for these states.
struct ResourceElements {
  double pop00 = 0.0;
  double pop01 = 0.0;
  double pop02 = 0.0;
  double pop10 = 0.0;
  double pop11 = 0.0;
  double pop20 = 0.0;
  double pop22 = 0.0;
  double coh00_11 = 0.0;
  double coh00_22 = 0.0;
  double coh11_22 = 0.0;
};

Matrix resource_matrix(const ResourceElements& elements);

// Closed-form element table of the weak-measurement protected resource:
// (R x R) CAD[(M x M) |Phi><Phi| (M x M)] (R x R), unnormalized; the trace is
// the joint success probability of both filters.
ResourceElements wm_resource_elements(const ChannelSpec& spec, const WMStrength& wm,
                                      const QMRStrength& qmr);

// Same state built operationally from the operator pipeline.
DensityMatrix wm_protected_resource(const ChannelSpec& spec, const WMStrength& wm,
                                    const QMRStrength& qmr);

// Environment-assisted variant: keep only the no-jump operator of each channel
// branch, then reverse.  Variant::Table swaps in the alternate coefficient
// table whose branch terms carry extra population factors.
ResourceElements eam_resource_elements(const ChannelSpec& spec, const QMRStrength& qmr,
                                       Variant variant = Variant::Operator);

DensityMatrix eam_protected_resource(const ChannelSpec& spec, const QMRStrength& qmr,
                                     Variant variant = Variant::Operator);

// Max elementwise gap between the two EAM tables at the given point.
double eam_variant_gap(const ChannelSpec& spec, const QMRStrength& qmr);

// The same protected states built by explicit operator composition instead of
// the element tables; cross-check targets for the closed forms.
DensityMatrix wm_resource_pipeline(const ChannelSpec& spec, const WMStrength& wm,
                                   const QMRStrength& qmr);
DensityMatrix eam_resource_pipeline(const ChannelSpec& spec, const QMRStrength& qmr);

// Reversal strengths that equalize the surviving populations.  The symmetric
// forms take d1 = d2 = d and p1 = p2 = p; the pair forms handle distinct
// levels.
double optimal_q_wm(double p, double d, double mu);
QMRStrength optimal_q_wm_pair(const WMStrength& wm, const DampingParams& damping, double mu);
double optimal_q_eam(double d, double mu);
QMRStrength optimal_q_eam_pair(const DampingParams& damping, double mu);

namespace detail {
void require_strength(double value, const char* name);  // [0, 1)
}

}  // namespace qutel
