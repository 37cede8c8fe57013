#include "qutel/analytics.hpp"
#include "qutel/sweep.hpp"
#include "qutel/verify.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace {

using namespace qutel;

std::optional<double> parse_q(const std::string& text) {
  if (text == "optimal") {
    return std::nullopt;
  }
  std::size_t used = 0;
  const double value = std::stod(text, &used);
  if (used != text.size()) {
    throw std::invalid_argument("q must be 'optimal' or a number, got '" + text + "'");
  }
  return value;
}

// Accepts either a single value or start:stop:count.
GridAxis parse_axis(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) {
    const double v = std::stod(text);
    return {v, v, 1};
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    throw std::invalid_argument("grid must be 'value' or 'start:stop:count', got '" + text +
                                "'");
  }
  GridAxis axis;
  axis.start = std::stod(text.substr(0, first));
  axis.stop = std::stod(text.substr(first + 1, second - first - 1));
  axis.count = std::stoi(text.substr(second + 1));
  return axis;
}

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

// Flat key=value file, one pair per line, '#' starts a comment.
std::map<std::string, std::string> load_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file '" + path + "'");
  }
  std::map<std::string, std::string> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    const std::string key = eq == std::string::npos ? std::string() : trim(line.substr(0, eq));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " is not a key=value pair");
    }
    if (!pairs.emplace(key, trim(line.substr(eq + 1))).second) {
      throw std::invalid_argument("config repeats key '" + key + "'");
    }
  }
  return pairs;
}

bool parse_switch(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on") {
    return true;
  }
  if (value == "0" || value == "false" || value == "off") {
    return false;
  }
  throw std::invalid_argument("config key '" + key + "' expects a boolean, got '" + value +
                              "'");
}

void emit(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file '" + path + "'");
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("failed while writing '" + path + "'");
  }
}

int run_point(double mu, double d, double p, const std::string& scheme_text,
              const std::string& q_text, bool alt_variant) {
  const MeritPoint pt =
      merit_point(mu, d, p, parse_scheme(scheme_text), parse_q(q_text),
                  alt_variant ? Variant::Table : Variant::Operator);
  std::cout << "mu " << format_number(pt.mu) << '\n'
            << "d " << format_number(pt.d) << '\n'
            << "p " << format_number(pt.p) << '\n'
            << "scheme " << scheme_name(pt.scheme) << '\n'
            << "q " << format_number(pt.q) << '\n'
            << "F_cad " << format_number(pt.F_cad) << '\n'
            << "F " << format_number(selected_fidelity(pt)) << '\n'
            << "P " << format_number(selected_probability(pt)) << '\n'
            << "F_imp " << format_number(pt.F_imp) << '\n'
            << "eq21_discrepancy " << format_number(pt.eq21_discrepancy) << '\n';
  return 0;
}

int run_sweep_command(const SweepSpec& spec, const std::string& out_path) {
  const SweepResult result = run_sweep(spec);
  emit(out_path, result.csv);
  if (!result.oracle_failures.empty()) {
    for (const std::string& failure : result.oracle_failures) {
      std::cerr << "oracle check failed: " << failure << '\n';
    }
    return 1;
  }
  return 0;
}

int run_verify() {
  const auto results = verify::run_all_checks();
  for (const auto& result : results) {
    std::cout << verify::format_line(result) << '\n';
  }
  return verify::all_passed(results) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qutrit teleportation through correlated damping: protected-resource closed "
               "forms, operator oracles, and deterministic parameter sweeps"};
  app.require_subcommand(1);

  // point
  auto* point_cmd = app.add_subcommand("point", "evaluate a single parameter point");
  double mu = 0.0, d = 0.0, p = 0.0;
  std::string q_text = "optimal";
  std::string scheme_text = "eam";
  bool point_alt = false;
  point_cmd->add_option("--mu", mu, "correlation weight in [0, 1]");
  point_cmd->add_option("--d", d, "damping strength in [0, 1]");
  point_cmd->add_option("--p", p, "weak-measurement strength in [0, 1)");
  point_cmd->add_option("--q", q_text, "reversal strength: 'optimal' or a value in [0, 1)");
  point_cmd->add_option("--scheme", scheme_text, "none, wm or eam");
  point_cmd->add_flag("--eq21-variant", point_alt,
                      "use the alternate fixed-coefficient tables");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a parameter grid as CSV");
  std::string grid_mu = "0", grid_d = "0", grid_p = "0";
  std::string sweep_q = "optimal";
  std::string sweep_scheme = "eam";
  std::string out_path = "-";
  int jobs = 1;
  bool sweep_alt = false;
  bool oracle_check = false;
  std::string config_path;
  auto* grid_mu_opt =
      sweep_cmd->add_option("--grid-mu", grid_mu, "correlation grid: value or start:stop:count");
  auto* grid_d_opt =
      sweep_cmd->add_option("--grid-d", grid_d, "damping grid: value or start:stop:count");
  auto* grid_p_opt =
      sweep_cmd->add_option("--grid-p", grid_p, "measurement grid: value or start:stop:count");
  auto* mu_single = sweep_cmd->add_option("--mu", grid_mu, "single correlation value");
  auto* d_single = sweep_cmd->add_option("--d", grid_d, "single damping value");
  auto* p_single = sweep_cmd->add_option("--p", grid_p, "single measurement value");
  mu_single->excludes(grid_mu_opt);
  d_single->excludes(grid_d_opt);
  p_single->excludes(grid_p_opt);
  auto* q_opt =
      sweep_cmd->add_option("--q", sweep_q, "reversal strength: 'optimal' or a value in [0, 1)");
  auto* scheme_opt = sweep_cmd->add_option("--scheme", sweep_scheme, "none, wm or eam");
  auto* out_opt = sweep_cmd->add_option("--out", out_path, "output path, '-' for stdout");
  auto* jobs_opt =
      sweep_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* alt_opt = sweep_cmd->add_flag("--eq21-variant", sweep_alt,
                                      "use the alternate fixed-coefficient tables");
  auto* oracle_opt = sweep_cmd->add_flag("--oracle-check", oracle_check,
                                         "cross-check every point against the operator pipeline");
  sweep_cmd->add_option("--config", config_path,
                        "flat key=value file with '#' comments; explicit flags win");

  // figure
  auto* figure_cmd = app.add_subcommand("figure", "run a named preset sweep");
  std::string preset_name;
  std::string figure_out = "-";
  int figure_jobs = 1;
  bool figure_alt = false;
  figure_cmd->add_option("preset", preset_name, "one of fig2, fig3, fig4, fig5a, fig5b")
      ->required();
  figure_cmd->add_option("--out", figure_out, "output path, '-' for stdout");
  figure_cmd->add_option("--jobs", figure_jobs, "worker threads")->check(CLI::PositiveNumber);
  figure_cmd->add_flag("--eq21-variant", figure_alt,
                       "use the alternate fixed-coefficient tables");

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "run the acceptance checks and report pass/fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (point_cmd->parsed()) {
      return run_point(mu, d, p, scheme_text, q_text, point_alt);
    }
    if (sweep_cmd->parsed()) {
      if (!config_path.empty()) {
        const auto pairs = load_flat_config(config_path);
        std::set<std::string> used;
        const auto fetch = [&](const std::string& key) -> const std::string* {
          const auto it = pairs.find(key);
          if (it == pairs.end()) {
            return nullptr;
          }
          used.insert(key);
          return &it->second;
        };
        const auto fill_axis = [&](const char* grid_key, const char* single_key,
                                   CLI::Option* grid_opt, CLI::Option* single_opt,
                                   std::string& target) {
          const std::string* grid_value = fetch(grid_key);
          const std::string* single_value = fetch(single_key);
          if (grid_value && single_value) {
            throw std::invalid_argument(std::string("config sets both '") + grid_key +
                                        "' and '" + single_key + "'");
          }
          if (grid_opt->count() > 0 || single_opt->count() > 0) {
            return;  // explicit flags win
          }
          if (grid_value) {
            target = *grid_value;
          } else if (single_value) {
            target = *single_value;
          }
        };
        fill_axis("grid-mu", "mu", grid_mu_opt, mu_single, grid_mu);
        fill_axis("grid-d", "d", grid_d_opt, d_single, grid_d);
        fill_axis("grid-p", "p", grid_p_opt, p_single, grid_p);
        const auto fill_text = [&](const char* key, CLI::Option* opt, std::string& target) {
          const std::string* value = fetch(key);
          if (value && opt->count() == 0) {
            target = *value;
          }
        };
        fill_text("q", q_opt, sweep_q);
        fill_text("scheme", scheme_opt, sweep_scheme);
        fill_text("out", out_opt, out_path);
        if (const std::string* value = fetch("jobs"); value && jobs_opt->count() == 0) {
          std::size_t consumed = 0;
          const int parsed = std::stoi(*value, &consumed);
          if (consumed != value->size() || parsed <= 0) {
            throw std::invalid_argument("config key 'jobs' expects a positive integer, got '" +
                                        *value + "'");
          }
          jobs = parsed;
        }
        if (const std::string* value = fetch("eq21-variant"); value && alt_opt->count() == 0) {
          sweep_alt = parse_switch("eq21-variant", *value);
        }
        if (const std::string* value = fetch("oracle-check");
            value && oracle_opt->count() == 0) {
          oracle_check = parse_switch("oracle-check", *value);
        }
        for (const auto& [key, value] : pairs) {
          if (!used.contains(key)) {
            throw std::invalid_argument("unknown config key '" + key + "'");
          }
        }
      }
      SweepSpec spec;
      spec.mu = parse_axis(grid_mu);
      spec.d = parse_axis(grid_d);
      spec.p = parse_axis(grid_p);
      spec.scheme = parse_scheme(sweep_scheme);
      spec.q = parse_q(sweep_q);
      spec.variant = sweep_alt ? Variant::Table : Variant::Operator;
      spec.oracle_check = oracle_check;
      spec.jobs = jobs;
      return run_sweep_command(spec, out_path);
    }
    if (figure_cmd->parsed()) {
      SweepSpec spec = sweep_preset(preset_name);
      spec.variant = figure_alt ? Variant::Table : Variant::Operator;
      spec.jobs = figure_jobs;
      return run_sweep_command(spec, figure_out);
    }
    if (verify_cmd->parsed()) {
      return run_verify();
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
