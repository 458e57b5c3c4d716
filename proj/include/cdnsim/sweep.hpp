// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cdnsim/engine.hpp"
#include "cdnsim/scenario_json.hpp"

namespace cdnsim {

/// Splits a dotted parameter path into tokens ("a.b.0.c" -> a, b, 0, c).
inline std::vector<std::string> split_param_path(const std::string& path) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : path) {
    if (ch == '.') {
      tokens.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  tokens.push_back(cur);
  return tokens;
}

/// Resolves a dotted path inside a scenario document; numeric tokens index
/// arrays. Returns nullptr when any step is missing.
inline nlohmann::json* resolve_param_path(nlohmann::json& doc,
                                          const std::string& path) {
  nlohmann::json* cur = &doc;
  for (const std::string& token : split_param_path(path)) {
    if (cur->is_object()) {
      auto it = cur->find(token);
      if (it == cur->end()) return nullptr;
      cur = &*it;
    } else if (cur->is_array()) {
      if (token.empty() ||
          token.find_first_not_of("0123456789") != std::string::npos)
        return nullptr;
      const std::size_t index = std::stoul(token);
      if (index >= cur->size()) return nullptr;
      cur = &(*cur)[index];
    } else {
      return nullptr;
    }
  }
  return cur;
}

/// Parses a sweep value token: valid JSON scalars (numbers, booleans) keep
/// their type, anything else becomes a string.
inline nlohmann::json parse_sweep_value(const std::string& token) {
  nlohmann::json v = nlohmann::json::parse(token, nullptr, false);
  if (v.is_discarded() || v.is_object() || v.is_array())
    return nlohmann::json(token);
  return v;
}

/// A parameter sweep: one dotted path, the values to try and the seeds to
/// pair with each value. Runs the full cross product.
struct SweepSpec {
  std::string param_path;
  std::vector<std::string> values;       // raw tokens, kept for reporting
  std::vector<std::uint64_t> seeds;
};

struct SweepRunResult {
  std::size_t value_index = 0;
  std::uint64_t seed = 0;
  std::string value_token;
  bool ok = false;
  std::string error;
  SimulationReport report;
};

/// Executes every (value, seed) combination of the sweep over the base
/// document. Runs are independent and execute on `jobs` worker threads;
/// results come back ordered by (value index, seed index) regardless of
/// completion order. A per-run failure is recorded, not thrown.
inline std::vector<SweepRunResult> run_sweep(const nlohmann::json& base_doc,
                                             const SweepSpec& spec,
                                             unsigned jobs,
                                             const RunOptions& options = {}) {
  struct Task {
    std::size_t value_index;
    std::size_t seed_index;
  };
  std::vector<Task> tasks;
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi)
    for (std::size_t si = 0; si < spec.seeds.size(); ++si)
      tasks.push_back({vi, si});

  std::vector<SweepRunResult> results(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      SweepRunResult& result = results[i];
      result.value_index = task.value_index;
      result.seed = spec.seeds[task.seed_index];
      result.value_token = spec.values[task.value_index];
      try {
        nlohmann::json doc = base_doc;
        nlohmann::json* slot = resolve_param_path(doc, spec.param_path);
        if (slot == nullptr)
          throw ScenarioError(std::vector<ValidationIssue>{
              {spec.param_path, "parameter path does not resolve"}});
        *slot = parse_sweep_value(result.value_token);
        doc["simulation"]["seed"] = result.seed;
        const Scenario scenario = parse_scenario_text(doc.dump(2) + "\n");
        result.report = run(scenario, options);
        result.ok = true;
      } catch (const std::exception& e) {
        result.ok = false;
        result.error = e.what();
      }
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  return results;
}

inline constexpr const char* kSweepHeader =
    "value,seed,status,switching_wh,gateway_wh,provider_edge_wh,core_wh,"
    "wdm_wh,server_wh,storage_wh,wireless_device_wh,decoding_wh,total_wh,"
    "hit_rate,requests";

inline std::string sweep_csv_string(const std::vector<SweepRunResult>& results) {
  std::string out = kSweepHeader;
  out += "\n";
  for (const auto& r : results) {
    out += r.value_token;
    out += "," + std::to_string(r.seed);
    out += r.ok ? ",ok" : ",error";
    if (r.ok) {
      for (std::size_t i = 0; i < kEnergyClassCount; ++i)
        out += "," + fmt_g12(r.report.aggregate.by_class[i]);
      out += "," + fmt_g12(r.report.aggregate.total_wh);
      out += "," + fmt_g12(r.report.hit_rate());
      out += "," + std::to_string(r.report.aggregate.request_count);
    } else {
      for (int i = 0; i < 12; ++i) out += ",";
    }
    out += "\n";
  }
  return out;
}

}  // namespace cdnsim
