// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cdnsim/engine.hpp"
#include "cdnsim/report.hpp"
#include "cdnsim/scenario_json.hpp"
#include "cdnsim/sweep.hpp"

namespace cdnsim {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;     // I/O or internal failure
inline constexpr int kExitValidation = 2;  // bad scenario or bad sweep param

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return buffer.str();
}

inline nlohmann::json parse_document(const std::string& text,
                                     const std::string& label) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(
        std::vector<ValidationIssue>{{label, std::string("parse error: ") + e.what()}});
  }
}

inline void print_issues(const ScenarioError& error, std::ostream& err) {
  for (const auto& issue : error.issues())
    err << issue.field << ": " << issue.message << "\n";
}

}  // namespace detail

/// `validate <scenario>`: exits 0 with "OK" on a valid document, 2 with one
/// `field: message` line per violation, 1 on I/O failure.
inline int cmd_validate(const std::string& scenario_path, std::ostream& out,
                        std::ostream& err) {
  try {
    load_scenario(scenario_path);
    out << "OK\n";
    return kExitOk;
  } catch (const ScenarioError& e) {
    detail::print_issues(e, err);
    return kExitValidation;
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return kExitRuntime;
  }
}

struct SimulateArgs {
  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides the document's seed
  bool requests_csv = false;
};

/// `simulate`: runs the scenario and writes summary.json + timeseries.csv
/// (+ requests.csv when asked) into out_dir. Prints one human summary line.
inline int cmd_simulate(const SimulateArgs& args, std::ostream& out,
                        std::ostream& err) {
  try {
    const std::string text = detail::read_file(args.scenario_path);
    nlohmann::json doc = detail::parse_document(text, args.scenario_path);
    if (args.seed) {
      if (!doc.is_object() || !doc.contains("simulation") ||
          !doc["simulation"].is_object())
        throw ScenarioError(std::vector<ValidationIssue>{
            {"simulation", "required field missing"}});
      doc["simulation"]["seed"] = *args.seed;
    }
    const Scenario scenario =
        args.seed ? parse_scenario_text(doc.dump(2) + "\n")
                  : parse_scenario_text(text, args.scenario_path);

    RunOptions options;
    options.collect_requests = args.requests_csv;
    const SimulationReport report = run(scenario, options);

    std::filesystem::create_directories(args.out_dir);
    const std::filesystem::path dir(args.out_dir);
    write_summary_json(report, (dir / "summary.json").string());
    write_timeseries_csv(report, (dir / "timeseries.csv").string());
    if (args.requests_csv)
      write_requests_csv(report, (dir / "requests.csv").string());

    out << "total_wh=" << fmt_g12(report.aggregate.total_wh)
        << " requests=" << report.aggregate.request_count
        << " hit_rate=" << fmt_g12(report.hit_rate()) << "\n";
    return kExitOk;
  } catch (const ScenarioError& e) {
    detail::print_issues(e, err);
    return kExitValidation;
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitRuntime;
  }
}

struct SweepArgs {
  std::string scenario_path;
  std::string param_path;
  std::vector<std::string> values;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  unsigned jobs = 0;  // 0 = hardware concurrency
};

/// `sweep`: runs values x seeds, one subdirectory per run plus sweep.csv with
/// rows in (value index, seed) order. Exits 2 when the parameter path does
/// not resolve in the base document, 1 when any run failed.
inline int cmd_sweep(const SweepArgs& args, std::ostream& out,
                     std::ostream& err) {
  try {
    const std::string text = detail::read_file(args.scenario_path);
    nlohmann::json doc = detail::parse_document(text, args.scenario_path);

    if (resolve_param_path(doc, args.param_path) == nullptr) {
      err << args.param_path
          << ": parameter path does not resolve in the scenario document\n";
      return kExitValidation;
    }

    SweepSpec spec;
    spec.param_path = args.param_path;
    spec.values = args.values;
    spec.seeds = args.seeds;
    const auto results = run_sweep(doc, spec, args.jobs);

    std::filesystem::create_directories(args.out_dir);
    const std::filesystem::path dir(args.out_dir);
    bool any_failed = false;
    for (const auto& result : results) {
      const std::filesystem::path run_dir =
          dir / ("value" + std::to_string(result.value_index) + "_seed" +
                 std::to_string(result.seed));
      std::filesystem::create_directories(run_dir);
      if (result.ok) {
        write_summary_json(result.report, (run_dir / "summary.json").string());
        write_timeseries_csv(result.report,
                             (run_dir / "timeseries.csv").string());
      } else {
        any_failed = true;
        detail::write_file((run_dir / "error.txt").string(),
                           result.error + "\n");
      }
    }
    detail::write_file((dir / "sweep.csv").string(), sweep_csv_string(results));

    out << "sweep: " << results.size() << " runs, "
        << (any_failed ? "with failures" : "all ok") << ", results in "
        << args.out_dir << "\n";
    return any_failed ? kExitRuntime : kExitOk;
  } catch (const ScenarioError& e) {
    detail::print_issues(e, err);
    return kExitValidation;
  } catch (const IoError& e) {
    err << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace cdnsim
