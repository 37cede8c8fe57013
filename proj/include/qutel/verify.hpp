#pragma once

#include <string>
#include <vector>

namespace qutel::verify {

enum class Status {
  Pass,
  Fail,
  Info,  // measured finding, reported but never a failure
};

struct CheckResult {
  int criterion = 0;
  std::string name;
  Status status = Status::Fail;
  double residual = 0.0;
  std::string details;
};

// The twelve acceptance checks, in order.
CheckResult check_cptp_soundness(double corruption = 0.0);  // 1; corruption > 0 is the
                                                            // negative-control hook
CheckResult check_filter_identities();                      // 2
CheckResult check_noiseless_exactness();                    // 3
CheckResult check_closed_form_equivalence();                // 4
CheckResult check_average_fidelity_identities();            // 5
CheckResult check_anchor_values();                          // 6
CheckResult check_scheme_ordering();                        // 7
CheckResult check_balanced_improvement_sign();              // 8
CheckResult check_monotonicity();                           // 9
CheckResult check_variant_findings();                       // 10 (informational)
CheckResult check_reversal_optimality_gap();                // 11 (informational)
CheckResult check_sweep_determinism();                      // 12

std::vector<CheckResult> run_all_checks();

std::string format_line(const CheckResult& result);

// True when no non-informational check failed.
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace qutel::verify
