// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.
//
// Scenario documents assembled in code for the engine and CLI tests.

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace testdoc {

using nlohmann::json;

// Flat per-bit equipment numbers so expected energies stay easy to reason
// about. All capacities positive, core/WDM ratios positive.
inline json equipment() {
  return json{
      {"es_power_w", 150},    {"es_capacity_bps", 48e9},
      {"g_power_w", 1100},    {"g_capacity_bps", 660e9},
      {"pe_power_w", 4200},   {"pe_capacity_bps", 560e9},
      {"c_power_w", 10000},   {"c_capacity_bps", 1.28e12},
      {"wdm_power_w", 811},   {"wdm_capacity_bps", 40e9},
      {"sr_power_w", 500},    {"sr_capacity_bps", 40e9},
      {"sd_power_w", 5000},   {"sd_capacity_bits", 1.2e15},
  };
}

inline json wifi_profile() {
  return json{
      {"rho_idle_w", 0.82},  {"rho_tx_w", 1.9},          {"rho_rx_w", 1.4},
      {"gamma_xg_j", 1e-4},  {"gamma_xr_j", 5e-5},       {"phy_rate_bps", 54e6},
      {"frame_payload_bits", 12000},
  };
}

// origin -> edge-1 with one cluster; small and fast.
inline json tiny_doc() {
  json doc;
  doc["topology"]["nodes"] = json::array(
      {json{{"id", "origin"}, {"tier", "origin"}},
       json{{"id", "edge-1"},
            {"tier", "edge"},
            {"parent", "origin"},
            {"hop_contribution", 4},
            {"cache_capacity_bits", 0}}});
  doc["equipment"] = equipment();
  doc["content_space"] = json{
      {"catalog_size", 1},
      {"zipf_exponent", 1.0},
      {"size_bits", json{{"kind", "constant"}, {"value", 4e9}}},
      {"bitrate_bps", 4e6},
      {"lifetime_s", json{{"kind", "constant"}, {"value", 86400}}},
      {"replication_count", 2},
      {"initial_alive_fraction", 1.0},
  };
  doc["user_space"]["clusters"] = json::array(
      {json{{"id", "homes"},
            {"attach", "edge-1"},
            {"user_count", 20},
            {"request_rate_per_user_per_hr", 0.5}}});
  doc["simulation"] =
      json{{"horizon_s", 3600}, {"seed", 1}, {"report_interval_s", 900}};
  return doc;
}

// Three-tier hierarchy: origin, 2 regionals, 4 edges, 4 clusters. Knobs for
// the cache-comparison runs.
inline json tiered_doc(std::uint32_t catalog_size, double zipf_exponent,
                       double horizon_s, std::uint64_t seed,
                       bool caching_enabled, bool replication_enabled) {
  json doc;
  auto nodes = json::array();
  nodes.push_back(json{{"id", "origin"}, {"tier", "origin"}});
  for (int r = 1; r <= 2; ++r)
    nodes.push_back(json{{"id", "reg-" + std::to_string(r)},
                         {"tier", "regional"},
                         {"parent", "origin"},
                         {"hop_contribution", 5},
                         {"cache_capacity_bits", 1.2e11},
                         {"cache_policy", "LFU"}});
  for (int e = 1; e <= 4; ++e)
    nodes.push_back(json{{"id", "edge-" + std::to_string(e)},
                         {"tier", "edge"},
                         {"parent", "reg-" + std::to_string((e - 1) / 2 + 1)},
                         {"hop_contribution", 2 + (e % 2)},
                         {"cache_capacity_bits", 4e10},
                         {"cache_policy", "LRU"}});
  doc["topology"]["nodes"] = nodes;
  doc["equipment"] = equipment();
  doc["content_space"] = json{
      {"catalog_size", catalog_size},
      {"zipf_exponent", zipf_exponent},
      {"size_bits", json{{"kind", "lognormal"}, {"mu", 22.1}, {"sigma", 0.5}}},
      {"bitrate_bps", 4e6},
      {"lifetime_s", json{{"kind", "uniform"}, {"lo", 7200}, {"hi", 86400}}},
      {"popularity_shape",
       json{{"kind", "exponential-decay"}, {"half_life_s", 7200}}},
      {"replication_count", 2},
      {"decode", json{{"alpha_j", 18}, {"beta_j_per_bit", 2.5e-8}}},
      {"initial_alive_fraction", 0.5},
      {"publish_window_fraction", 0.1},
  };
  doc["user_space"]["device_profiles"]["wifi-home"] = wifi_profile();
  auto clusters = json::array();
  for (int c = 1; c <= 4; ++c) {
    json cluster{{"id", "cluster-" + std::to_string(c)},
                 {"attach", "edge-" + std::to_string(c)},
                 {"user_count", 120},
                 {"request_rate_per_user_per_hr", 3.0}};
    if (c % 2 == 0) cluster["device_profile"] = "wifi-home";
    clusters.push_back(cluster);
  }
  doc["user_space"]["clusters"] = clusters;
  doc["policies"] = json{
      {"replication",
       json{{"enabled", replication_enabled},
            {"period_s", 900},
            {"score_threshold_per_hr", 40},
            {"ewma_alpha", 0.3},
            {"ewma_window_s", 900}}},
      {"device_energy_mode", "full"},
      {"caching_enabled", caching_enabled},
  };
  doc["simulation"] = json{{"horizon_s", horizon_s},
                           {"seed", seed},
                           {"report_interval_s", 600}};
  return doc;
}

}  // namespace testdoc
