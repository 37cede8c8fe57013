#pragma once

#include "qutel/analytics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qutel {

// Inclusive linear grid; count == 1 emits just start.
struct GridAxis {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
};

std::vector<double> grid_values(const GridAxis& axis);

struct SweepSpec {
  GridAxis mu;
  GridAxis d;
  GridAxis p;
  Scheme scheme = Scheme::EAM;
  std::optional<double> q;  // nullopt = population-equalizing optimum
  Variant variant = Variant::Operator;
  bool oracle_check = false;
  int jobs = 1;
};

struct SweepResult {
  std::string csv;
  std::vector<std::string> oracle_failures;  // nonempty only with oracle_check
};

// Evaluates the full grid in row-major order (mu outer, d, then p inner).
// Output bytes depend only on the grid, scheme, q policy and variant; the
// worker count and the oracle toggle never change them.
SweepResult run_sweep(const SweepSpec& spec);

// Named figure presets.
SweepSpec sweep_preset(const std::string& name);
std::vector<std::string> sweep_preset_names();

// Locale-independent formatting with 12 significant digits.
std::string format_number(double value);

const char* scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);

// CSV column header, fixed by the output contract.
inline constexpr const char* kCsvHeader = "mu,d,p,q,scheme,F_cad,F,P,F_imp,eq21_discrepancy";

}  // namespace qutel
