#include "qutel/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace qutel {

std::string format_number(double value) {
  char buf[40];
  const auto result =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  if (result.ec != std::errc()) {
    throw std::runtime_error("format_number: conversion failed");
  }
  return std::string(buf, result.ptr);
}

const char* scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::None:
      return "none";
    case Scheme::WM:
      return "wm";
    case Scheme::EAM:
      return "eam";
  }
  throw std::invalid_argument("scheme_name: unknown scheme");
}

Scheme parse_scheme(const std::string& name) {
  if (name == "none") return Scheme::None;
  if (name == "wm") return Scheme::WM;
  if (name == "eam") return Scheme::EAM;
  throw std::invalid_argument("scheme must be one of none, wm, eam; got '" + name + "'");
}

std::vector<double> grid_values(const GridAxis& axis) {
  if (axis.count < 1) {
    throw std::invalid_argument("grid axis needs at least one point");
  }
  if (!(axis.start >= 0.0 && axis.start <= 1.0 && axis.stop >= 0.0 && axis.stop <= 1.0)) {
    throw std::invalid_argument("grid axis values must lie in [0, 1]");
  }
  if (axis.stop < axis.start) {
    throw std::invalid_argument("grid axis stop must not precede start");
  }
  std::vector<double> values;
  values.reserve(axis.count);
  if (axis.count == 1) {
    values.push_back(axis.start);
    return values;
  }
  for (int i = 0; i < axis.count; ++i) {
    values.push_back(axis.start + (axis.stop - axis.start) * i / (axis.count - 1));
  }
  return values;
}

namespace {

std::string axis_echo(const GridAxis& axis) {
  return format_number(axis.start) + ":" + format_number(axis.stop) + ":" +
         std::to_string(axis.count);
}

std::string config_echo(const SweepSpec& spec) {
  std::string line = "# config: scheme=";
  line += scheme_name(spec.scheme);
  line += " q=";
  line += spec.q ? format_number(*spec.q) : "optimal";
  line += " grid-mu=" + axis_echo(spec.mu);
  line += " grid-d=" + axis_echo(spec.d);
  line += " grid-p=" + axis_echo(spec.p);
  line += " eq21-variant=";
  line += (spec.variant == Variant::Table) ? "on" : "off";
  return line;
}

std::string format_row(const MeritPoint& pt) {
  std::string row;
  row += format_number(pt.mu);
  row += ',';
  row += format_number(pt.d);
  row += ',';
  row += format_number(pt.p);
  row += ',';
  row += format_number(pt.q);
  row += ',';
  row += scheme_name(pt.scheme);
  row += ',';
  row += format_number(pt.F_cad);
  row += ',';
  row += format_number(selected_fidelity(pt));
  row += ',';
  row += format_number(selected_probability(pt));
  row += ',';
  row += format_number(pt.F_imp);
  row += ',';
  row += format_number(pt.eq21_discrepancy);
  return row;
}

double clamp_strength(double q) { return std::min(q, 1.0 - 1e-9); }

// Compares the element tables and the teleport reduction against the
// operator-built states at one grid point.
std::vector<std::string> oracle_check_point(double mu, double d, double p,
                                            std::optional<double> q_explicit) {
  constexpr double kTol = 1e-8;
  std::vector<std::string> failures;
  const ChannelSpec spec{{d, d}, mu};
  const auto where = [&] {
    return "mu=" + format_number(mu) + " d=" + format_number(d) + " p=" + format_number(p);
  };

  const double q_wm = clamp_strength(q_explicit.value_or(optimal_q_wm(p, d, mu)));
  const double q_eam = clamp_strength(q_explicit.value_or(optimal_q_eam(d, mu)));

  const DensityMatrix wm_table = wm_protected_resource(spec, {p, p}, {q_wm, q_wm});
  const DensityMatrix wm_ops = wm_resource_pipeline(spec, {p, p}, {q_wm, q_wm});
  const double wm_gap = (wm_table.mat() - wm_ops.mat()).cwiseAbs().maxCoeff();
  if (wm_gap > kTol) {
    failures.push_back(where() + ": wm elements vs operator pipeline residual " +
                       format_number(wm_gap));
  }

  const DensityMatrix eam_table = eam_protected_resource(spec, {q_eam, q_eam});
  const DensityMatrix eam_ops = eam_resource_pipeline(spec, {q_eam, q_eam});
  const double eam_gap = (eam_table.mat() - eam_ops.mat()).cwiseAbs().maxCoeff();
  if (eam_gap > kTol) {
    failures.push_back(where() + ": eam elements vs operator pipeline residual " +
                       format_number(eam_gap));
  }

  const InputAngles probe{std::numbers::pi / 4.0, std::numbers::pi / 4.0, 0.0, 0.0};
  const Vector psi = input_state(probe);
  const DensityMatrix circuit =
      teleport_circuit(psi, wm_ops, /*normalize_shared=*/true).average;
  const DensityMatrix reduced = output_from_elements(probe, wm_resource_elements(
                                                                spec, {p, p}, {q_wm, q_wm}));
  const double out_gap = (circuit.mat() - reduced.mat()).cwiseAbs().maxCoeff();
  if (out_gap > kTol) {
    failures.push_back(where() + ": teleport reduction vs circuit residual " +
                       format_number(out_gap));
  }
  return failures;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  const std::vector<double> mus = grid_values(spec.mu);
  const std::vector<double> ds = grid_values(spec.d);
  const std::vector<double> ps = grid_values(spec.p);

  struct Task {
    double mu, d, p;
  };
  std::vector<Task> tasks;
  tasks.reserve(mus.size() * ds.size() * ps.size());
  for (double mu : mus) {
    for (double d : ds) {
      for (double p : ps) {
        tasks.push_back({mu, d, p});
      }
    }
  }

  std::vector<std::string> rows(tasks.size());
  std::vector<std::vector<std::string>> failures(tasks.size());

  const auto evaluate = [&](std::size_t index) {
    const Task& t = tasks[index];
    rows[index] = format_row(merit_point(t.mu, t.d, t.p, spec.scheme, spec.q, spec.variant));
    if (spec.oracle_check) {
      failures[index] = oracle_check_point(t.mu, t.d, t.p, spec.q);
    }
  };

  const int jobs = std::clamp<int>(spec.jobs, 1, static_cast<int>(tasks.size()) > 0
                                                     ? static_cast<int>(tasks.size())
                                                     : 1);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      evaluate(i);
    }
  } else {
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    const std::size_t chunk = (tasks.size() + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(tasks.size(), begin + chunk);
      if (begin >= end) {
        break;
      }
      workers.emplace_back([&, begin, end] {
        for (std::size_t i = begin; i < end; ++i) {
          evaluate(i);
        }
      });
    }
    for (std::thread& worker : workers) {
      worker.join();
    }
  }

  SweepResult result;
  result.csv = config_echo(spec);
  result.csv += '\n';
  result.csv += kCsvHeader;
  result.csv += '\n';
  for (const std::string& row : rows) {
    result.csv += row;
    result.csv += '\n';
  }
  for (std::vector<std::string>& f : failures) {
    result.oracle_failures.insert(result.oracle_failures.end(),
                                  std::make_move_iterator(f.begin()),
                                  std::make_move_iterator(f.end()));
  }
  return result;
}

SweepSpec sweep_preset(const std::string& name) {
  SweepSpec spec;
  if (name == "fig2") {
    spec.scheme = Scheme::WM;
    spec.mu = {0.8, 0.8, 1};
    spec.d = {0.0, 1.0, 101};
    spec.p = {0.0, 0.9, 4};
  } else if (name == "fig3") {
    spec.scheme = Scheme::WM;
    spec.mu = {0.0, 1.0, 51};
    spec.d = {0.6, 0.6, 1};
    spec.p = {0.0, 0.99, 51};
  } else if (name == "fig4") {
    spec.scheme = Scheme::EAM;
    spec.mu = {0.0, 1.0, 51};
    spec.d = {0.0, 1.0, 51};
    spec.p = {0.0, 0.0, 1};
  } else if (name == "fig5a") {
    spec.scheme = Scheme::EAM;
    spec.mu = {0.0, 1.0, 51};
    spec.d = {0.6, 0.6, 1};
    spec.p = {0.0, 0.99, 51};
  } else if (name == "fig5b") {
    spec.scheme = Scheme::EAM;
    spec.mu = {0.0, 1.0, 51};
    spec.d = {0.0, 1.0, 51};
    spec.p = {0.9, 0.9, 1};
  } else {
    throw std::invalid_argument("unknown preset '" + name +
                                "'; expected fig2, fig3, fig4, fig5a or fig5b");
  }
  return spec;
}

std::vector<std::string> sweep_preset_names() {
  return {"fig2", "fig3", "fig4", "fig5a", "fig5b"};
}

}  // namespace qutel
