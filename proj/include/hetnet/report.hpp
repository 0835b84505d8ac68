#pragma once

// Sweeps over one model parameter and the CSV / JSON-lines writers for their
// results.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hetnet/analytic.hpp"
#include "hetnet/errors.hpp"
#include "hetnet/model.hpp"
#include "hetnet/scenario.hpp"
#include "hetnet/simulate.hpp"

namespace hetnet {

inline constexpr const char* kVersion = "0.1.0";

enum class ReportFormat { csv, json_lines };

// Outcome of one method at one sweep point. `result` is empty when the
// method failed or does not apply; `status` then says why.
struct MethodOutcome {
  CoverageMethod method = CoverageMethod::analytic_general;
  std::optional<CoverageResult> result;
  std::string status = "ok";
};

struct RunRow {
  std::optional<double> sweep_value;  // user units; empty for a single point
  std::vector<MethodOutcome> outcomes;
};

struct RunReport {
  std::size_t tiers = 0;
  std::vector<RunRow> rows;
  nlohmann::json metadata = nlohmann::json::object();
};

struct RunSettings {
  SimulationConfig simulation;
  Simulator simulator = Simulator::two_d;
  AnalyticOptions analytic;
  unsigned parallelism = 1;  // sweep rows evaluated at once
};

inline MethodOutcome run_method(const NetworkModel& model, CoverageMethod method,
                                const RunSettings& settings, unsigned sim_threads = 1) {
  MethodOutcome out;
  out.method = method;
  try {
    switch (method) {
      case CoverageMethod::analytic_general:
        out.result = coverage_probability(model, settings.analytic);
        break;
      case CoverageMethod::analytic_closed_form:
        out.result = coverage_closed_form(model, settings.analytic);
        if (!out.result) out.status = "not-applicable: needs zero noise and equal pathloss exponents";
        break;
      case CoverageMethod::monte_carlo: {
        auto cfg = settings.simulation;
        cfg.threads = sim_threads;
        cfg.keep_records = false;
        const auto est = settings.simulator == Simulator::two_d ? simulate_2d(model, cfg)
                                                                : simulate_equivalent_1d(model, cfg);
        out.result = est.coverage_result();
        break;
      }
    }
  } catch (const ValidationError& e) {
    out.result.reset();
    out.status = std::string("validation-error: ") + e.what();
  } catch (const DomainError& e) {
    out.result.reset();
    out.status = std::string("validation-error: ") + e.what();
  } catch (const NumericError& e) {
    out.result.reset();
    out.status = std::string("numeric-error: ") + e.what();
  }
  return out;
}

inline nlohmann::json run_metadata(const NetworkModel& model, const RunSettings& settings) {
  nlohmann::json meta;
  meta["tool"] = "hetnet";
  meta["version"] = kVersion;
  meta["model"] = to_json(model);
  meta["seed"] = settings.simulation.seed;
  meta["trials"] = settings.simulation.trials;
  meta["simulator"] = to_string(settings.simulator);
  meta["tolerance"] = settings.analytic.tolerance;
  meta["rng"] = rng_description();
  return meta;
}

// Every method at a single model point.
inline RunReport run_point(const NetworkModel& model, const std::vector<CoverageMethod>& methods,
                           const RunSettings& settings) {
  require_valid(model);
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.tiers = model.size();
  RunRow row;
  for (auto m : methods) row.outcomes.push_back(run_method(model, m, settings, settings.parallelism));
  report.rows.push_back(std::move(row));
  report.metadata = run_metadata(model, settings);
  report.metadata["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// One row per sweep value, in sweep order whatever the completion order.
// Failures are recorded in the row; the sweep itself only throws for an
// invalid base model or sweep specification.
inline RunReport run_sweep(const NetworkModel& model, const SweepSpec& sweep,
                           const RunSettings& settings) {
  require_valid(model);
  if (sweep.tier && *sweep.tier >= model.size()) {
    throw ValidationError("sweep tier " + std::to_string(*sweep.tier + 1) + " does not exist");
  }
  for (double v : sweep.values) {
    if (!std::isfinite(v)) throw ValidationError("sweep values must be finite");
  }
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.tiers = model.size();
  report.rows.resize(sweep.values.size());

  const unsigned workers = std::max(
      1u, std::min<unsigned>(settings.parallelism, static_cast<unsigned>(sweep.values.size())));
  const unsigned sim_threads = std::max(1u, settings.parallelism / workers);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < sweep.values.size(); i = next++) {
      auto& row = report.rows[i];
      row.sweep_value = sweep.values[i];
      const auto point = apply_sweep_value(model, sweep, i);
      const auto violations = validate(point);
      for (auto m : sweep.methods) {
        if (!violations.empty()) {
          MethodOutcome bad;
          bad.method = m;
          bad.status = "validation-error: " + violations.front().describe();
          row.outcomes.push_back(std::move(bad));
          continue;
        }
        row.outcomes.push_back(run_method(point, m, settings, sim_threads));
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  report.metadata = run_metadata(model, settings);
  report.metadata["sweep"] = {{"parameter", to_string(sweep.parameter)},
                              {"tier", sweep.tier ? nlohmann::json(*sweep.tier + 1)
                                                  : nlohmann::json("all")},
                              {"units", sweep.values_in_db ? "db" : "linear"}};
  report.metadata["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace detail {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> report_columns(std::size_t tiers) {
  std::vector<std::string> cols = {"sweep_value", "method", "coverage", "error_estimate"};
  for (std::size_t k = 1; k <= tiers; ++k) cols.push_back("tier_" + std::to_string(k));
  cols.push_back("status");
  return cols;
}

}  // namespace detail

inline void emit_report(const RunReport& report, ReportFormat format, std::ostream& os) {
  const auto columns = detail::report_columns(report.tiers);
  if (format == ReportFormat::csv) {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << '\n';
    for (const auto& row : report.rows) {
      for (const auto& o : row.outcomes) {
        os << (row.sweep_value ? detail::format_number(*row.sweep_value) : "") << ','
           << to_string(o.method) << ',';
        if (o.result) {
          os << detail::format_number(o.result->value) << ','
             << detail::format_number(o.result->error_estimate);
          for (std::size_t k = 0; k < report.tiers; ++k) {
            os << ',';
            if (k < o.result->per_tier.size()) os << detail::format_number(o.result->per_tier[k]);
          }
        } else {
          os << ',';
          for (std::size_t k = 0; k < report.tiers; ++k) os << ',';
        }
        os << ',' << detail::csv_field(o.status) << '\n';
      }
    }
  } else {
    os << nlohmann::json{{"metadata", report.metadata}}.dump() << '\n';
    for (const auto& row : report.rows) {
      for (const auto& o : row.outcomes) {
        nlohmann::ordered_json line;
        line["sweep_value"] = row.sweep_value ? nlohmann::ordered_json(*row.sweep_value) : nullptr;
        line["method"] = to_string(o.method);
        line["coverage"] = o.result ? nlohmann::ordered_json(o.result->value) : nullptr;
        line["error_estimate"] = o.result ? nlohmann::ordered_json(o.result->error_estimate) : nullptr;
        for (std::size_t k = 0; k < report.tiers; ++k) {
          const bool has = o.result && k < o.result->per_tier.size();
          line["tier_" + std::to_string(k + 1)] =
              has ? nlohmann::ordered_json(o.result->per_tier[k]) : nullptr;
        }
        line["status"] = o.status;
        os << line.dump() << '\n';
      }
    }
  }
  if (!os) throw IoError("failed to write report");
}

inline void emit_report(const RunReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  emit_report(report, format, out);
  out.flush();
  if (!out) throw IoError("failed to write " + path);
}

// One parsed CSV data line; missing numbers read back as NaN.
struct CsvRecord {
  double sweep_value = std::numeric_limits<double>::quiet_NaN();
  std::string method;
  double coverage = std::numeric_limits<double>::quiet_NaN();
  double error_estimate = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> per_tier;
  std::string status;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

inline double parse_field(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ValidationError("bad number in report: " + s);
  return v;
}

}  // namespace detail

inline std::vector<CsvRecord> read_csv_report(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("report is empty");
  const auto header = detail::split_csv_line(line);
  if (header.size() < 5 || header.front() != "sweep_value" || header.back() != "status") {
    throw ValidationError("unrecognised report header");
  }
  const std::size_t tiers = header.size() - 5;
  std::vector<CsvRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != header.size()) throw ValidationError("wrong field count in report line: " + line);
    CsvRecord r;
    r.sweep_value = detail::parse_field(f[0]);
    r.method = f[1];
    r.coverage = detail::parse_field(f[2]);
    r.error_estimate = detail::parse_field(f[3]);
    for (std::size_t k = 0; k < tiers; ++k) r.per_tier.push_back(detail::parse_field(f[4 + k]));
    r.status = f.back();
    out.push_back(std::move(r));
  }
  return out;
}

// Simulation output: summary as metadata, then the SINR CCDF.
inline void emit_simulation(const SimulationEstimate& est, const nlohmann::json& metadata,
                            ReportFormat format, std::ostream& os) {
  if (format == ReportFormat::csv) {
    os << "threshold,threshold_db,ccdf\n";
    for (const auto& [t, p] : est.ccdf) {
      os << detail::format_number(t) << ',' << detail::format_number(linear_to_db(t)) << ','
         << detail::format_number(p) << '\n';
    }
  } else {
    nlohmann::json meta = metadata;
    meta["coverage"] = est.coverage;
    meta["coverage_stderr"] = est.coverage_stderr;
    meta["tier_counts"] = est.tier_counts;
    meta["covered_counts"] = est.covered_counts;
    meta["empty_trials"] = est.empty_trials;
    meta["boundary_radius"] = est.boundary_radius;
    meta["tail_interference"] = est.tail_interference;
    meta["warnings"] = est.warnings;
    os << nlohmann::json{{"metadata", meta}}.dump() << '\n';
    for (const auto& [t, p] : est.ccdf) {
      nlohmann::ordered_json line;
      line["threshold"] = t;
      line["threshold_db"] = linear_to_db(t);
      line["ccdf"] = p;
      os << line.dump() << '\n';
    }
  }
  if (!os) throw IoError("failed to write simulation output");
}

}  // namespace hetnet
