// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdnsim/report.hpp"
#include "cdnsim/scenario.hpp"

namespace cdnsim {
namespace detail {

// Strict object reader: typed getters record an issue for every wrong type or
// missing required field, finish() flags unknown keys so typos never pass
// silently. Getters return defaults on failure so one bad field does not hide
// the rest of the document's problems.
class JsonObj {
 public:
  JsonObj(const nlohmann::json* j, std::string path,
          std::vector<ValidationIssue>& issues)
      : j_(j), path_(std::move(path)), issues_(issues) {
    if (j_ != nullptr && !j_->is_object()) {
      issues_.push_back({path_, "must be an object"});
      j_ = nullptr;
    }
  }

  bool present() const { return j_ != nullptr; }

  const nlohmann::json* field(const std::string& key, bool required) {
    if (j_ == nullptr) return nullptr;
    used_.insert(key);
    auto it = j_->find(key);
    if (it == j_->end()) {
      if (required)
        issues_.push_back({path_ + "." + key, "required field missing"});
      return nullptr;
    }
    return &*it;
  }

  double num(const std::string& key, std::optional<double> fallback) {
    const nlohmann::json* v = field(key, !fallback.has_value());
    if (v == nullptr) return fallback.value_or(0.0);
    if (!v->is_number()) {
      issues_.push_back({path_ + "." + key, "must be a number"});
      return fallback.value_or(0.0);
    }
    return v->get<double>();
  }

  std::uint64_t uint(const std::string& key,
                     std::optional<std::uint64_t> fallback) {
    const nlohmann::json* v = field(key, !fallback.has_value());
    if (v == nullptr) return fallback.value_or(0);
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0)
      return static_cast<std::uint64_t>(v->get<std::int64_t>());
    if (v->is_number_float() && v->get<double>() >= 0 &&
        v->get<double>() <= 9.22e18)
      return static_cast<std::uint64_t>(std::llround(v->get<double>()));
    issues_.push_back({path_ + "." + key, "must be a non-negative integer"});
    return fallback.value_or(0);
  }

  std::string str(const std::string& key, std::optional<std::string> fallback) {
    const nlohmann::json* v = field(key, !fallback.has_value());
    if (v == nullptr) return fallback.value_or("");
    if (!v->is_string()) {
      issues_.push_back({path_ + "." + key, "must be a string"});
      return fallback.value_or("");
    }
    return v->get<std::string>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const nlohmann::json* v = field(key, false);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) {
      issues_.push_back({path_ + "." + key, "must be a boolean"});
      return fallback;
    }
    return v->get<bool>();
  }

  JsonObj object(const std::string& key, bool required) {
    return JsonObj(field(key, required), path_ + "." + key, issues_);
  }

  const nlohmann::json* array(const std::string& key, bool required) {
    const nlohmann::json* v = field(key, required);
    if (v != nullptr && !v->is_array()) {
      issues_.push_back({path_ + "." + key, "must be an array"});
      return nullptr;
    }
    return v;
  }

  void finish() {
    if (j_ == nullptr) return;
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      if (used_.find(it.key()) == used_.end())
        issues_.push_back({path_ + "." + it.key(), "unknown key"});
    }
  }

  const std::string& path() const { return path_; }
  std::vector<ValidationIssue>& issues() { return issues_; }

 private:
  const nlohmann::json* j_;
  std::string path_;
  std::vector<ValidationIssue>& issues_;
  std::set<std::string> used_;
};

inline DistributionSpec parse_distribution(JsonObj obj) {
  DistributionSpec dist;
  if (!obj.present()) return dist;
  const std::string kind = obj.str("kind", std::nullopt);
  if (kind == "constant") {
    dist.kind = DistributionSpec::Kind::Constant;
    dist.value = obj.num("value", std::nullopt);
  } else if (kind == "uniform") {
    dist.kind = DistributionSpec::Kind::Uniform;
    dist.lo = obj.num("lo", std::nullopt);
    dist.hi = obj.num("hi", std::nullopt);
  } else if (kind == "lognormal") {
    dist.kind = DistributionSpec::Kind::Lognormal;
    dist.mu = obj.num("mu", std::nullopt);
    dist.sigma = obj.num("sigma", std::nullopt);
  } else {
    obj.issues().push_back(
        {obj.path() + ".kind",
         "must be one of constant, uniform, lognormal"});
  }
  obj.finish();
  return dist;
}

inline PopularityShape parse_popularity_shape(JsonObj obj) {
  PopularityShape shape;
  if (!obj.present()) return shape;
  const std::string kind = obj.str("kind", std::nullopt);
  if (kind == "constant") {
    shape.kind = PopularityShape::Kind::Constant;
  } else if (kind == "linear-decay") {
    shape.kind = PopularityShape::Kind::LinearDecay;
  } else if (kind == "exponential-decay") {
    shape.kind = PopularityShape::Kind::ExponentialDecay;
    shape.half_life_s = obj.num("half_life_s", std::nullopt);
  } else {
    obj.issues().push_back(
        {obj.path() + ".kind",
         "must be one of constant, linear-decay, exponential-decay"});
  }
  obj.finish();
  return shape;
}

inline EquipmentProfile parse_equipment(JsonObj obj) {
  EquipmentProfile eq;
  if (!obj.present()) return eq;
  eq.es_power_w = obj.num("es_power_w", std::nullopt);
  eq.es_capacity_bps = obj.num("es_capacity_bps", std::nullopt);
  eq.g_power_w = obj.num("g_power_w", std::nullopt);
  eq.g_capacity_bps = obj.num("g_capacity_bps", std::nullopt);
  eq.pe_power_w = obj.num("pe_power_w", std::nullopt);
  eq.pe_capacity_bps = obj.num("pe_capacity_bps", std::nullopt);
  eq.c_power_w = obj.num("c_power_w", std::nullopt);
  eq.c_capacity_bps = obj.num("c_capacity_bps", std::nullopt);
  eq.wdm_power_w = obj.num("wdm_power_w", std::nullopt);
  eq.wdm_capacity_bps = obj.num("wdm_capacity_bps", std::nullopt);
  eq.sr_power_w = obj.num("sr_power_w", std::nullopt);
  eq.sr_capacity_bps = obj.num("sr_capacity_bps", std::nullopt);
  eq.sd_power_w = obj.num("sd_power_w", std::nullopt);
  eq.sd_capacity_bits = obj.num("sd_capacity_bits", std::nullopt);
  obj.finish();
  return eq;
}

inline WirelessDeviceProfile parse_device_profile(JsonObj obj) {
  WirelessDeviceProfile dev;
  if (!obj.present()) return dev;
  dev.rho_idle_w = obj.num("rho_idle_w", std::nullopt);
  dev.rho_tx_w = obj.num("rho_tx_w", std::nullopt);
  dev.rho_rx_w = obj.num("rho_rx_w", std::nullopt);
  dev.gamma_xg_j = obj.num("gamma_xg_j", std::nullopt);
  dev.gamma_xr_j = obj.num("gamma_xr_j", std::nullopt);
  dev.phy_rate_bps = obj.num("phy_rate_bps", std::nullopt);
  dev.frame_payload_bits = obj.num("frame_payload_bits", std::nullopt);
  obj.finish();
  return dev;
}

inline NodeTier parse_tier(JsonObj& obj) {
  const std::string tier = obj.str("tier", std::nullopt);
  if (tier == "origin") return NodeTier::Origin;
  if (tier == "regional") return NodeTier::Regional;
  if (tier == "edge") return NodeTier::Edge;
  if (!tier.empty())
    obj.issues().push_back(
        {obj.path() + ".tier", "must be one of origin, regional, edge"});
  return NodeTier::Edge;
}

inline CachePolicy parse_cache_policy(JsonObj& obj) {
  const std::string policy = obj.str("cache_policy", std::string("LRU"));
  if (policy == "LRU") return CachePolicy::Lru;
  if (policy == "LFU") return CachePolicy::Lfu;
  obj.issues().push_back(
      {obj.path() + ".cache_policy", "must be LRU or LFU"});
  return CachePolicy::Lru;
}

}  // namespace detail

/// Parses and validates a scenario document. Collects every issue before
/// throwing, so callers can report the full list in one pass.
inline Scenario parse_scenario_text(const std::string& text,
                                    const std::string& source_label = "") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(std::vector<ValidationIssue>{
        {source_label.empty() ? "document" : source_label,
         std::string("parse error: ") + e.what()}});
  }

  std::vector<ValidationIssue> issues;
  Scenario s;
  s.source_hash = content_hash(text);

  detail::JsonObj root(&doc, "", issues);

  {
    detail::JsonObj topo = root.object("topology", true);
    if (const nlohmann::json* nodes = topo.array("nodes", true)) {
      for (std::size_t i = 0; i < nodes->size(); ++i) {
        detail::JsonObj n(&(*nodes)[i],
                          "topology.nodes[" + std::to_string(i) + "]", issues);
        CdnNode node;
        node.id = n.str("id", std::nullopt);
        node.tier = detail::parse_tier(n);
        node.cache_capacity_bits = n.uint("cache_capacity_bits", std::uint64_t{0});
        node.cache_policy = detail::parse_cache_policy(n);
        node.parent = n.str("parent", std::string(""));
        node.hop_contribution =
            static_cast<std::uint32_t>(n.uint("hop_contribution", std::uint64_t{0}));
        n.finish();
        s.topology.nodes.push_back(std::move(node));
      }
    }
    topo.finish();
  }

  s.equipment = detail::parse_equipment(root.object("equipment", true));

  {
    detail::JsonObj cs = root.object("content_space", true);
    s.content_space.catalog_size =
        static_cast<std::uint32_t>(cs.uint("catalog_size", std::nullopt));
    s.content_space.zipf_exponent = cs.num("zipf_exponent", std::nullopt);
    s.content_space.size_bits =
        detail::parse_distribution(cs.object("size_bits", true));
    s.content_space.bitrate_bps = cs.num("bitrate_bps", std::nullopt);
    s.content_space.lifetime_s =
        detail::parse_distribution(cs.object("lifetime_s", true));
    if (cs.field("popularity_shape", false) != nullptr)
      s.content_space.popularity_shape =
          detail::parse_popularity_shape(cs.object("popularity_shape", false));
    s.content_space.replication_count =
        static_cast<std::uint32_t>(cs.uint("replication_count", std::uint64_t{1}));
    if (cs.field("decode", false) != nullptr) {
      detail::JsonObj dec = cs.object("decode", false);
      s.content_space.decode.alpha_j = dec.num("alpha_j", 0.0);
      s.content_space.decode.beta_j_per_bit = dec.num("beta_j_per_bit", 0.0);
      dec.finish();
    }
    s.content_space.initial_alive_fraction =
        cs.num("initial_alive_fraction", 0.5);
    s.content_space.publish_window_fraction =
        cs.num("publish_window_fraction", 0.1);
    cs.finish();
  }

  {
    detail::JsonObj us = root.object("user_space", true);
    if (us.field("device_profiles", false) != nullptr) {
      detail::JsonObj profiles = us.object("device_profiles", false);
      if (profiles.present()) {
        const nlohmann::json* field = us.field("device_profiles", false);
        for (auto it = field->begin(); it != field->end(); ++it) {
          s.device_profiles[it.key()] = detail::parse_device_profile(
              detail::JsonObj(&it.value(),
                              "user_space.device_profiles." + it.key(),
                              issues));
        }
      }
    }
    if (const nlohmann::json* clusters = us.array("clusters", true)) {
      for (std::size_t i = 0; i < clusters->size(); ++i) {
        detail::JsonObj c(&(*clusters)[i],
                          "user_space.clusters[" + std::to_string(i) + "]",
                          issues);
        ClientCluster cluster;
        cluster.id = c.str("id", std::nullopt);
        cluster.attach = c.str("attach", std::nullopt);
        cluster.user_count =
            static_cast<std::uint32_t>(c.uint("user_count", std::nullopt));
        cluster.request_rate_per_user_per_hr =
            c.num("request_rate_per_user_per_hr", std::nullopt);
        cluster.diurnal_profile.fill(1.0);
        if (const nlohmann::json* diurnal = c.array("diurnal_profile", false)) {
          if (diurnal->size() != 24) {
            issues.push_back({c.path() + ".diurnal_profile",
                              "must have exactly 24 entries"});
          } else {
            for (std::size_t h = 0; h < 24; ++h) {
              if (!(*diurnal)[h].is_number()) {
                issues.push_back({c.path() + ".diurnal_profile",
                                  "entries must be numbers"});
                break;
              }
              cluster.diurnal_profile[h] = (*diurnal)[h].get<double>();
            }
          }
        }
        if (c.field("device_profile", false) != nullptr)
          cluster.device_profile = c.str("device_profile", std::string(""));
        cluster.hop_contribution =
            static_cast<std::uint32_t>(c.uint("hop_contribution", std::uint64_t{0}));
        c.finish();
        s.topology.client_clusters.push_back(std::move(cluster));
      }
    }
    us.finish();
  }

  if (root.field("policies", false) != nullptr) {
    detail::JsonObj pol = root.object("policies", false);
    if (pol.field("replication", false) != nullptr) {
      detail::JsonObj rep = pol.object("replication", false);
      auto& r = s.policies.replication;
      r.enabled = rep.boolean("enabled", false);
      r.period_s = rep.num("period_s", 600.0);
      r.score_threshold_per_hr = rep.num("score_threshold_per_hr", 1e18);
      r.ewma_alpha = rep.num("ewma_alpha", 0.3);
      r.ewma_window_s = rep.num("ewma_window_s", 3600.0);
      rep.finish();
    }
    const std::string mode =
        pol.str("device_energy_mode", std::string("full"));
    if (mode == "full") {
      s.policies.device_energy_mode = DeviceEnergyMode::Full;
    } else if (mode == "incremental") {
      s.policies.device_energy_mode = DeviceEnergyMode::Incremental;
    } else {
      issues.push_back(
          {"policies.device_energy_mode", "must be full or incremental"});
    }
    s.policies.caching_enabled = pol.boolean("caching_enabled", true);
    pol.finish();
  }

  {
    detail::JsonObj sim = root.object("simulation", true);
    s.simulation.horizon_s = sim.num("horizon_s", std::nullopt);
    if (const nlohmann::json* seed = sim.field("seed", true)) {
      if (seed->is_number_unsigned()) {
        s.simulation.seed = seed->get<std::uint64_t>();
      } else if (seed->is_number_integer() && seed->get<std::int64_t>() >= 0) {
        s.simulation.seed = static_cast<std::uint64_t>(seed->get<std::int64_t>());
      } else {
        issues.push_back(
            {"simulation.seed", "must be a non-negative integer"});
      }
    }
    s.simulation.report_interval_s = sim.num("report_interval_s", 3600.0);
    sim.finish();
  }

  root.finish();

  for (const auto& issue : validate(s)) issues.push_back(issue);
  if (!issues.empty()) throw ScenarioError(std::move(issues));

  s.topology.finalize();
  return s;
}

/// Reads the file and delegates to parse_scenario_text. Loading is a pure
/// function of the file bytes.
inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return parse_scenario_text(buffer.str(), path);
}

}  // namespace cdnsim
