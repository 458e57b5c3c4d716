// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdnsim/energy.hpp"

namespace cdnsim {

/// Locale-independent decimal rendering with 12 significant digits — the
/// canonical float format of all emitted reports.
inline std::string fmt_g12(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v,
                           std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

/// Shortest round-trip rendering; used where a reader must recover the exact
/// double (the per-request audit trail).
inline std::string fmt_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// FNV-1a 64 over raw bytes, rendered as fixed-width hex.
inline std::string content_hash(std::string_view bytes) {
  std::uint64_t h = detail::fnv1a64(bytes);
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string("fnv1a64:") + buf;
}

struct TimeSeriesPoint {
  double t_s = 0;
  std::array<double, kEnergyClassCount> cumulative_wh{};
  double total_wh = 0;
  double hit_rate = 0;
};

struct ContentSummary {
  std::string content_id;
  double total_wh = 0;
  std::uint64_t requests = 0;
};

struct CacheStats {
  std::uint64_t edge_hits = 0;
  std::uint64_t regional_hits = 0;
  std::uint64_t origin_serves = 0;
  std::uint64_t skipped_requests = 0;  // arrivals with no alive content
};

struct RunMeta {
  std::uint64_t seed = 0;
  std::string scenario_hash;
  std::string version;
  double horizon_s = 0;
  double report_interval_s = 0;
};

/// Audit row for one delivered request; written to requests.csv when enabled.
struct RequestRecord {
  double t_s = 0;
  std::string cluster_id;
  std::string content_id;
  std::string serving_node;
  std::uint32_t hops = 0;
  std::uint64_t size_bits = 0;
  double transport_wh = 0;
  double device_wh = 0;
  double decode_wh = 0;
};

struct SimulationReport {
  EnergyLedger aggregate;
  std::map<std::string, EnergyLedger> per_cluster;
  EnergyLedger replication;
  std::uint64_t replication_pushes = 0;
  CacheStats cache;
  std::vector<ContentSummary> top_contents;
  std::vector<TimeSeriesPoint> timeseries;
  std::vector<RequestRecord> requests;  // only filled when requested
  RunMeta meta;

  /// Fraction of delivered requests served below the origin.
  double hit_rate() const {
    if (aggregate.request_count == 0) return 0;
    return static_cast<double>(cache.edge_hits + cache.regional_hits) /
           static_cast<double>(aggregate.request_count);
  }
};

namespace detail {

// Canonical JSON: keys sorted (nlohmann objects already are), 2-space indent,
// doubles rendered through fmt_g12. Byte-identical output for equal reports.
inline void canonical_dump(const nlohmann::json& j, std::string& out,
                           int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + nlohmann::json(it.key()).dump() + ": ";
        canonical_dump(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        canonical_dump(el, out, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += fmt_g12(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

inline nlohmann::json ledger_json(const EnergyLedger& ledger) {
  nlohmann::json j;
  for (std::size_t i = 0; i < kEnergyClassCount; ++i)
    j[std::string(energy_class_name(static_cast<EnergyClass>(i))) + "_wh"] =
        ledger.by_class[i];
  j["total_wh"] = ledger.total_wh;
  j["request_count"] = ledger.request_count;
  return j;
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace detail

inline std::string summary_json_string(const SimulationReport& report) {
  nlohmann::json j;
  j["aggregate"] = detail::ledger_json(report.aggregate);
  nlohmann::json clusters;
  for (const auto& [id, ledger] : report.per_cluster)
    clusters[id] = detail::ledger_json(ledger);
  j["clusters"] = clusters;
  j["replication"] = detail::ledger_json(report.replication);
  j["replication_pushes"] = report.replication_pushes;
  j["cache"] = {{"edge_hits", report.cache.edge_hits},
                {"regional_hits", report.cache.regional_hits},
                {"origin_serves", report.cache.origin_serves},
                {"skipped_requests", report.cache.skipped_requests},
                {"hit_rate", report.hit_rate()}};
  nlohmann::json top = nlohmann::json::array();
  for (const auto& c : report.top_contents)
    top.push_back({{"content_id", c.content_id},
                   {"total_wh", c.total_wh},
                   {"requests", c.requests}});
  j["top_contents"] = top;
  j["meta"] = {{"seed", report.meta.seed},
               {"scenario_hash", report.meta.scenario_hash},
               {"version", report.meta.version},
               {"horizon_s", report.meta.horizon_s},
               {"report_interval_s", report.meta.report_interval_s}};
  std::string out;
  detail::canonical_dump(j, out, 0);
  out += "\n";
  return out;
}

inline void write_summary_json(const SimulationReport& report,
                               const std::string& path) {
  detail::write_file(path, summary_json_string(report));
}

inline constexpr const char* kTimeSeriesHeader =
    "t_s,switching_wh,gateway_wh,provider_edge_wh,core_wh,wdm_wh,server_wh,"
    "storage_wh,wireless_device_wh,decoding_wh,total_wh,hit_rate";

inline std::string timeseries_csv_string(const SimulationReport& report) {
  std::string out = kTimeSeriesHeader;
  out += "\n";
  for (const auto& point : report.timeseries) {
    out += fmt_g12(point.t_s);
    for (std::size_t i = 0; i < kEnergyClassCount; ++i)
      out += "," + fmt_g12(point.cumulative_wh[i]);
    out += "," + fmt_g12(point.total_wh);
    out += "," + fmt_g12(point.hit_rate);
    out += "\n";
  }
  return out;
}

inline void write_timeseries_csv(const SimulationReport& report,
                                 const std::string& path) {
  detail::write_file(path, timeseries_csv_string(report));
}

inline constexpr const char* kRequestsHeader =
    "t_s,cluster_id,content_id,serving_node,hops,size_bits,transport_wh,"
    "device_wh,decode_wh";

inline std::string requests_csv_string(const SimulationReport& report) {
  std::string out = kRequestsHeader;
  out += "\n";
  for (const auto& r : report.requests) {
    out += fmt_exact(r.t_s);
    out += "," + r.cluster_id;
    out += "," + r.content_id;
    out += "," + r.serving_node;
    out += "," + std::to_string(r.hops);
    out += "," + std::to_string(r.size_bits);
    out += "," + fmt_exact(r.transport_wh);
    out += "," + fmt_exact(r.device_wh);
    out += "," + fmt_exact(r.decode_wh);
    out += "\n";
  }
  return out;
}

inline void write_requests_csv(const SimulationReport& report,
                               const std::string& path) {
  detail::write_file(path, requests_csv_string(report));
}

}  // namespace cdnsim
