#pragma once

#include "qutel/linalg.hpp"

#include <string>
#include <vector>

namespace qutel {

// One jump/no-jump history of the damped resource state.  The environment is
// tracked only by excitation count plus an identity tag; histories with
// different tags are orthogonal and never interfere.
struct TrajectoryBranch {
  Vector system_state;  // 9-dim, unnormalized; squared norm = branch weight
  int env_excitations;  // 0, 1 or 2
  std::string tag;
};

// Unravels weak measurement, correlated damping and reversal acting on
// a|00> + b|11> + c|22> into explicit branches.  The uncorrelated and
// correlated channel halves are independent coarse branches with weights
// (1-mu, mu) folded into the amplitudes as square roots; they are never
// added coherently.
std::vector<TrajectoryBranch> unravel_wm(Complex a, Complex b, Complex c, double mu,
                                         double d, double p, double q);

// Same unraveling for the environment-assisted scheme: damping branches with
// any environment excitation are discarded (the zero-click post-selection)
// before the reversal.
std::vector<TrajectoryBranch> unravel_eam(Complex a, Complex b, Complex c, double mu,
                                          double d, double q);

// Sum of |s><s| over branches; equals the matching density-matrix pipeline.
Matrix reconstruct(const std::vector<TrajectoryBranch>& branches);

// Total squared norm, i.e. the probability that this branch list survives
// the filters applied so far.
double survival_probability(const std::vector<TrajectoryBranch>& branches);

}  // namespace qutel
