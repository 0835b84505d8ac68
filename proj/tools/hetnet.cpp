// hetnet: coverage, sweeps and simulation for multi-tier cellular models.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hetnet/hetnet.hpp"

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kNumeric = 2, kIo = 3 };

struct Options {
  std::string scenario = "paper_defaults";
  std::vector<std::string> methods;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::string out;
  std::string format = "csv";
  std::optional<double> tolerance;
  std::optional<std::string> simulator;
  std::optional<unsigned> threads;
};

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

double env_double(const char* name, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw hetnet::ValidationError(std::string(name) + " is not a number: " + text);
}

hetnet::CoverageMethod parse_method(const std::string& name) {
  if (name == "analytic") return hetnet::CoverageMethod::analytic_general;
  if (name == "closed-form") return hetnet::CoverageMethod::analytic_closed_form;
  if (name == "monte-carlo") return hetnet::CoverageMethod::monte_carlo;
  throw hetnet::ValidationError("unknown method " + name);
}

// Scenario plus command-line and environment overrides; flags win over the
// environment, which wins over the file.
struct Prepared {
  hetnet::Scenario scenario;
  hetnet::RunSettings settings;
  hetnet::ReportFormat format = hetnet::ReportFormat::csv;
};

Prepared prepare(const Options& opt) {
  Prepared p;
  p.scenario = hetnet::load_scenario(opt.scenario);
  auto& s = p.settings;
  s.simulation = p.scenario.simulation;
  s.simulator = p.scenario.simulator;
  s.analytic = p.scenario.analytic;

  if (auto t = env("HETNET_TOLERANCE")) s.analytic.tolerance = env_double("HETNET_TOLERANCE", *t);
  if (opt.tolerance) s.analytic.tolerance = *opt.tolerance;
  if (!(s.analytic.tolerance > 0.0 && s.analytic.tolerance < 1.0)) {
    throw hetnet::ValidationError("tolerance must lie in (0, 1)");
  }

  unsigned threads = 1;
  if (auto t = env("HETNET_THREADS")) {
    const double v = env_double("HETNET_THREADS", *t);
    if (!(v >= 1.0 && v <= 1024.0) || v != static_cast<unsigned>(v)) {
      throw hetnet::ValidationError("HETNET_THREADS must be a whole number in 1..1024");
    }
    threads = static_cast<unsigned>(v);
  }
  if (opt.threads) threads = *opt.threads;
  s.parallelism = threads;
  s.simulation.threads = threads;

  if (opt.seed) s.simulation.seed = *opt.seed;
  if (opt.trials) s.simulation.trials = *opt.trials;
  if (opt.simulator) {
    s.simulator = *opt.simulator == "1d" ? hetnet::Simulator::equivalent_1d : hetnet::Simulator::two_d;
  }
  hetnet::require_valid(s.simulation);
  p.format = opt.format == "jsonl" ? hetnet::ReportFormat::json_lines : hetnet::ReportFormat::csv;
  return p;
}

template <class Writer>
void write_output(const std::string& path, Writer&& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    std::cout.flush();
    if (!std::cout) throw hetnet::IoError("failed to write standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hetnet::IoError("cannot open " + path + " for writing");
  writer(out);
  out.flush();
  if (!out) throw hetnet::IoError("failed to write " + path);
}

int status_code(const std::string& status) {
  if (status.rfind("numeric-error", 0) == 0) return kNumeric;
  if (status.rfind("validation-error", 0) == 0) return kValidation;
  return kOk;
}

int cmd_coverage(const Options& opt) {
  const auto p = prepare(opt);
  std::vector<hetnet::CoverageMethod> methods;
  for (const auto& m : opt.methods) methods.push_back(parse_method(m));
  if (methods.empty()) methods.push_back(hetnet::CoverageMethod::analytic_general);
  const auto report = hetnet::run_point(p.scenario.model, methods, p.settings);
  write_output(opt.out, [&](std::ostream& os) { hetnet::emit_report(report, p.format, os); });
  int code = kOk;
  for (const auto& o : report.rows.front().outcomes) {
    const int c = status_code(o.status);
    if (c != kOk) {
      std::cerr << "hetnet: " << hetnet::to_string(o.method) << ": " << o.status << '\n';
      code = std::max(code, c);
    }
  }
  return code;
}

int cmd_sweep(const Options& opt) {
  const auto p = prepare(opt);
  if (!p.scenario.sweep) throw hetnet::ValidationError(opt.scenario + ": no \"sweep\" section");
  auto sweep = *p.scenario.sweep;
  if (!opt.methods.empty()) {
    sweep.methods.clear();
    for (const auto& m : opt.methods) sweep.methods.push_back(parse_method(m));
  }
  const auto report = hetnet::run_sweep(p.scenario.model, sweep, p.settings);
  write_output(opt.out, [&](std::ostream& os) { hetnet::emit_report(report, p.format, os); });
  std::size_t failed = 0;
  for (const auto& row : report.rows) {
    for (const auto& o : row.outcomes) failed += status_code(o.status) != kOk;
  }
  if (failed) std::cerr << "hetnet: " << failed << " sweep entries failed; see the status column\n";
  return kOk;
}

int cmd_simulate(const Options& opt) {
  const auto p = prepare(opt);
  const auto& model = p.scenario.model;
  const auto est = p.settings.simulator == hetnet::Simulator::two_d
                       ? hetnet::simulate_2d(model, p.settings.simulation)
                       : hetnet::simulate_equivalent_1d(model, p.settings.simulation);
  auto meta = hetnet::run_metadata(model, p.settings);
  write_output(opt.out, [&](std::ostream& os) { hetnet::emit_simulation(est, meta, p.format, os); });
  std::cerr.precision(6);
  std::cerr << "coverage " << est.coverage << " +/- " << est.coverage_stderr << " ("
            << est.trials << " trials, " << hetnet::to_string(p.settings.simulator) << ")\n";
  for (std::size_t k = 0; k < model.size(); ++k) {
    std::cerr << "tier " << k + 1 << " association " << est.tier_frequency(k) << '\n';
  }
  for (const auto& w : est.warnings) std::cerr << "warning: " << w << '\n';
  return kOk;
}

int cmd_validate(const Options& opt) {
  const auto scenario = hetnet::load_scenario(opt.scenario);
  std::cout << opt.scenario << ": ok, " << scenario.model.size() << " tiers";
  if (scenario.sweep) {
    std::cout << ", sweep over " << hetnet::to_string(scenario.sweep->parameter) << " with "
              << scenario.sweep->values.size() << " values";
  }
  std::cout << '\n';
  return kOk;
}

void add_common(CLI::App* cmd, Options& opt, bool simulation, bool methods) {
  cmd->add_option("--scenario", opt.scenario, "scenario JSON file, or paper_defaults");
  if (methods) {
    cmd->add_option("--method", opt.methods, "analytic, closed-form or monte-carlo (repeatable)")
        ->check(CLI::IsMember({"analytic", "closed-form", "monte-carlo"}));
  }
  cmd->add_option("--out", opt.out, "output file (default standard output)");
  cmd->add_option("--format", opt.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->add_option("--tolerance", opt.tolerance, "absolute tolerance of analytic results")
      ->check(CLI::Range(1e-15, 0.5));
  if (simulation) {
    cmd->add_option("--seed", opt.seed, "Monte-Carlo seed");
    cmd->add_option("--trials", opt.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--simulator", opt.simulator, "2d or 1d")->check(CLI::IsMember({"2d", "1d"}));
  }
  cmd->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1u, 1024u));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage of multi-tier cellular networks"};
  app.set_version_flag("--version", std::string(hetnet::kVersion));
  app.require_subcommand(1);

  Options opt;
  auto* coverage = app.add_subcommand("coverage", "coverage probability at one model point");
  auto* sweep = app.add_subcommand("sweep", "coverage over the scenario's sweep");
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo SINR distribution");
  auto* validate = app.add_subcommand("validate", "check a scenario file");
  add_common(coverage, opt, true, true);
  add_common(sweep, opt, true, true);
  add_common(simulate, opt, true, false);
  validate->add_option("--scenario", opt.scenario, "scenario JSON file, or paper_defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (coverage->parsed()) return cmd_coverage(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (validate->parsed()) return cmd_validate(opt);
  } catch (const hetnet::IoError& e) {
    std::cerr << "hetnet: " << e.what() << '\n';
    return kIo;
  } catch (const hetnet::ValidationError& e) {
    std::cerr << "hetnet: " << e.what() << '\n';
    return kValidation;
  } catch (const hetnet::DomainError& e) {
    std::cerr << "hetnet: " << e.what() << '\n';
    return kValidation;
  } catch (const hetnet::NumericError& e) {
    std::cerr << "hetnet: " << e.what() << '\n';
    return kNumeric;
  }
  return kValidation;
}
