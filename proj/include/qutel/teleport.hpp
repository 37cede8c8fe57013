#pragma once

#include "qutel/linalg.hpp"
#include "qutel/protection.hpp"

#include <vector>

namespace qutel {

// Parametrization of a pure qutrit
//   cos(t1)|0> + sin(t1)cos(t2) e^{i f1}|1> + sin(t1)sin(t2) e^{i f2}|2>
// with t in (0, pi/2] and f in [0, 2pi].
struct InputAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};

Vector input_state(const InputAngles& angles);

// Maximally entangled two-qutrit state (|00> + |11> + |22>)/sqrt(3).
Vector resource_state();

// Single-qutrit gate set used by the teleportation circuit.
struct Gates {
  Matrix hadamard;   // H|m> = (1/sqrt(3)) sum_n w^{mn} |n>, w = e^{2 pi i/3}
  Matrix shift;      // X|k> = |k+1 mod 3>
  Matrix clock;      // Z|k> = w^k |k>
  Matrix controlled_sub;  // two-qutrit |m,n> -> |m, n-m mod 3>
};

const Gates& gates();

// Bob's conditional correction for joint outcome (m, n).
Matrix correction(int m, int n);

struct TeleportOutcome {
  int m;
  int n;
  double probability;
  DensityMatrix state;  // normalized single-qutrit output for this outcome
};

struct TeleportReport {
  std::vector<TeleportOutcome> outcomes;  // all nine (m, n) in fixed order
  DensityMatrix average;                  // probability-weighted mixture over outcomes
  double success_probability;             // trace of the shared state before teleporting
};

// Runs the three-qutrit teleportation circuit with the given shared pair.
// The shared state must be normalized; pass normalize_shared = true to let an
// unnormalized state be rescaled (its trace is reported as the success
// probability).
TeleportReport teleport_circuit(const Vector& psi, const DensityMatrix& shared,
                                bool normalize_shared = false);

// Output state predicted by the closed-form element tables, normalized.
// Matches the circuit fed with the corresponding protected resource.
DensityMatrix output_closed_form_wm(const InputAngles& angles, const ChannelSpec& spec,
                                    const WMStrength& wm, const QMRStrength& qmr);
DensityMatrix output_closed_form_eam(const InputAngles& angles, const ChannelSpec& spec,
                                     const QMRStrength& qmr,
                                     Variant variant = Variant::Operator);

// Shared element-table reduction: output built from any protected resource's
// nonzero elements.
DensityMatrix output_from_elements(const InputAngles& angles, const ResourceElements& elements);

}  // namespace qutel
