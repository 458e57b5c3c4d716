// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdnsim/rng.hpp"

namespace cdnsim {

/// One validation failure: the offending field (dotted path into the scenario
/// document) and what constraint it violated.
struct ValidationIssue {
  std::string field;
  std::string message;
};

/// Thrown by the loader when a scenario document fails parsing or validation.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<ValidationIssue> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<ValidationIssue>& issues) {
    std::string out;
    for (const auto& issue : issues) {
      if (!out.empty()) out += "\n";
      out += issue.field + ": " + issue.message;
    }
    return out;
  }
  std::vector<ValidationIssue> issues_;
};

/// Thrown on filesystem failures (unreadable input, unwritable output).
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Power density (watts) and capacity pairs for each equipment class on the
/// transport path, plus data-centre storage. The per-bit cost of a class is
/// its power divided by its capacity.
struct EquipmentProfile {
  double es_power_w = 0;        ///< Ethernet switch power
  double es_capacity_bps = 1;   ///< Ethernet switch capacity
  double g_power_w = 0;         ///< gateway router power
  double g_capacity_bps = 1;    ///< gateway router capacity
  double pe_power_w = 0;        ///< provider edge router power
  double pe_capacity_bps = 1;   ///< provider edge router capacity
  double c_power_w = 0;         ///< core router power
  double c_capacity_bps = 1;    ///< core router capacity
  double wdm_power_w = 0;       ///< WDM equipment power
  double wdm_capacity_bps = 1;  ///< WDM equipment capacity
  double sr_power_w = 0;        ///< content server power
  double sr_capacity_bps = 1;   ///< content server capacity
  double sd_power_w = 0;        ///< storage power
  double sd_capacity_bits = 1;  ///< storage capacity in bits
};

/// Power profile of an 802.11 client device: idle draw, airtime coefficients
/// and the per-frame processing tolls on both directions.
struct WirelessDeviceProfile {
  double rho_idle_w = 0;
  double rho_tx_w = 0;
  double rho_rx_w = 0;
  double gamma_xg_j = 0;  ///< joules per generated frame
  double gamma_xr_j = 0;  ///< joules per received frame
  double phy_rate_bps = 1;
  double frame_payload_bits = 1;
};

/// Instantaneous radio usage: airtime fractions and frame rates.
struct AirtimeUsage {
  double tau_tx = 0;       ///< transmit airtime fraction in [0,1]
  double tau_rx = 0;       ///< receive airtime fraction in [0,1]
  double lambda_g_fps = 0; ///< generated frames per second
  double lambda_r_fps = 0; ///< received frames per second
};

/// Affine per-playback decoding energy: fixed joules plus joules per bit.
struct DecodeModel {
  double alpha_j = 0;
  double beta_j_per_bit = 0;
};

enum class NodeTier { Origin, Regional, Edge };

inline const char* node_tier_name(NodeTier tier) {
  switch (tier) {
    case NodeTier::Origin: return "origin";
    case NodeTier::Regional: return "regional";
    case NodeTier::Edge: return "edge";
  }
  return "?";
}

enum class CachePolicy { Lru, Lfu };

struct CdnNode {
  std::string id;
  NodeTier tier = NodeTier::Edge;
  std::uint64_t cache_capacity_bits = 0;  // ignored at the origin
  CachePolicy cache_policy = CachePolicy::Lru;
  std::string parent;            // empty iff origin
  std::uint32_t hop_contribution = 0;  // core hops on the link to the parent
};

struct ClientCluster {
  std::string id;
  std::string attach;  // id of the edge node this cluster hangs off
  std::uint32_t user_count = 1;
  double request_rate_per_user_per_hr = 0;
  std::array<double, 24> diurnal_profile{};  // hourly rate multipliers
  std::optional<std::string> device_profile; // absent = wired access
  std::uint32_t hop_contribution = 0;        // terminal hops below the edge node
};

/// Rooted tree of CDN nodes plus the client clusters hanging off its edges.
/// Immutable once loaded; finalize() builds the id lookup tables.
struct Topology {
  std::vector<CdnNode> nodes;
  std::vector<ClientCluster> client_clusters;

  void finalize() {
    node_index_.clear();
    cluster_index_.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) node_index_[nodes[i].id] = i;
    for (std::size_t i = 0; i < client_clusters.size(); ++i)
      cluster_index_[client_clusters[i].id] = i;
  }

  const CdnNode* find_node(const std::string& id) const {
    auto it = node_index_.find(id);
    return it == node_index_.end() ? nullptr : &nodes[it->second];
  }

  const ClientCluster* find_cluster(const std::string& id) const {
    auto it = cluster_index_.find(id);
    return it == cluster_index_.end() ? nullptr : &client_clusters[it->second];
  }

  std::size_t node_pos(const std::string& id) const {
    return node_index_.at(id);
  }

  /// Node ids from the cluster's attachment edge node up to the origin.
  std::vector<std::string> root_path(const ClientCluster& cluster) const {
    std::vector<std::string> path;
    const CdnNode* cur = find_node(cluster.attach);
    while (cur != nullptr) {
      path.push_back(cur->id);
      cur = cur->parent.empty() ? nullptr : find_node(cur->parent);
    }
    return path;
  }

 private:
  std::map<std::string, std::size_t> node_index_;
  std::map<std::string, std::size_t> cluster_index_;
};

/// Core hops between a node and a descendant node, summed from the edge
/// labels along the unique tree path. Throws std::invalid_argument when
/// `ancestor` is not on `descendant`'s root path.
inline std::uint32_t hop_count_between(const Topology& topo,
                                       const std::string& ancestor,
                                       const std::string& descendant) {
  std::uint32_t hops = 0;
  const CdnNode* cur = topo.find_node(descendant);
  if (cur == nullptr)
    throw std::invalid_argument("hop_count: unknown node " + descendant);
  while (true) {
    if (cur->id == ancestor) return hops;
    if (cur->parent.empty())
      throw std::invalid_argument("hop_count: " + ancestor +
                                  " is not an ancestor of " + descendant);
    hops += cur->hop_contribution;
    cur = topo.find_node(cur->parent);
    if (cur == nullptr)
      throw std::invalid_argument("hop_count: dangling parent link");
  }
}

/// Hops from a serving node down to a cluster: path labels plus the cluster's
/// terminal contribution.
inline std::uint32_t hop_count(const Topology& topo, const std::string& server,
                               const std::string& cluster_id) {
  const ClientCluster* cluster = topo.find_cluster(cluster_id);
  if (cluster == nullptr)
    throw std::invalid_argument("hop_count: unknown cluster " + cluster_id);
  return hop_count_between(topo, server, cluster->attach) +
         cluster->hop_contribution;
}

/// Spec of a scalar sampling distribution for content sizes and lifetimes.
struct DistributionSpec {
  enum class Kind { Constant, Uniform, Lognormal };
  Kind kind = Kind::Constant;
  double value = 0;          // constant
  double lo = 0, hi = 0;     // uniform
  double mu = 0, sigma = 0;  // lognormal of underlying normal

  double sample(Rng& rng) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::Uniform: return rng.uniform(lo, hi);
      case Kind::Lognormal: return std::exp(mu + sigma * rng.normal());
    }
    return 0;
  }
};

/// How a content's popularity weight evolves over its lifetime.
struct PopularityShape {
  enum class Kind { Constant, LinearDecay, ExponentialDecay };
  Kind kind = Kind::Constant;
  double half_life_s = 0;  // exponential decay only
};

struct ContentSpaceConfig {
  std::uint32_t catalog_size = 1;
  double zipf_exponent = 1.0;
  DistributionSpec size_bits;
  double bitrate_bps = 1;
  DistributionSpec lifetime_s;
  PopularityShape popularity_shape;
  std::uint32_t replication_count = 1;  // replicas kept in data centres
  DecodeModel decode;
  // Fraction of the catalog already alive at t=0; the rest publish uniformly
  // over the first publish_window_fraction of the horizon.
  double initial_alive_fraction = 0.5;
  double publish_window_fraction = 0.1;
};

struct ReplicationPolicyConfig {
  bool enabled = false;
  double period_s = 600;
  double score_threshold_per_hr = 1e18;
  double ewma_alpha = 0.3;       // smoothing factor in (0,1]
  double ewma_window_s = 3600;   // predictor window
};

enum class DeviceEnergyMode { Full, Incremental };

struct PoliciesConfig {
  ReplicationPolicyConfig replication;
  DeviceEnergyMode device_energy_mode = DeviceEnergyMode::Full;
  bool caching_enabled = true;
};

struct SimulationConfig {
  double horizon_s = 0;
  std::uint64_t seed = 0;
  double report_interval_s = 3600;
};

/// The complete validated input of one run. Immutable after load; safe to
/// share read-only across threads.
struct Scenario {
  Topology topology;
  EquipmentProfile equipment;
  ContentSpaceConfig content_space;
  std::map<std::string, WirelessDeviceProfile> device_profiles;
  PoliciesConfig policies;
  SimulationConfig simulation;
  std::string source_hash;  // hash of the document bytes this was loaded from
};

namespace detail {

inline void check(std::vector<ValidationIssue>& issues, bool ok,
                  const std::string& field, const std::string& message) {
  if (!ok) issues.push_back({field, message});
}

inline void validate_distribution(std::vector<ValidationIssue>& issues,
                                  const DistributionSpec& dist,
                                  const std::string& field) {
  switch (dist.kind) {
    case DistributionSpec::Kind::Constant:
      check(issues, dist.value >= 0, field + ".value", "must be >= 0");
      break;
    case DistributionSpec::Kind::Uniform:
      check(issues, dist.lo >= 0, field + ".lo", "must be >= 0");
      check(issues, dist.hi >= dist.lo, field + ".hi", "must be >= lo");
      break;
    case DistributionSpec::Kind::Lognormal:
      check(issues, dist.sigma >= 0, field + ".sigma", "must be >= 0");
      check(issues, std::isfinite(dist.mu), field + ".mu", "must be finite");
      break;
  }
}

}  // namespace detail

/// Full semantic validation. Returns every violated constraint; an empty
/// result means the scenario satisfies all type invariants.
inline std::vector<ValidationIssue> validate(const Scenario& s) {
  using detail::check;
  std::vector<ValidationIssue> issues;

  const auto& eq = s.equipment;
  const struct {
    const char* name;
    double power, capacity;
  } pairs[] = {
      {"es", eq.es_power_w, eq.es_capacity_bps},
      {"g", eq.g_power_w, eq.g_capacity_bps},
      {"pe", eq.pe_power_w, eq.pe_capacity_bps},
      {"c", eq.c_power_w, eq.c_capacity_bps},
      {"wdm", eq.wdm_power_w, eq.wdm_capacity_bps},
      {"sr", eq.sr_power_w, eq.sr_capacity_bps},
  };
  for (const auto& p : pairs) {
    check(issues, p.power >= 0, std::string("equipment.") + p.name + "_power_w",
          "must be >= 0");
    check(issues, p.capacity > 0,
          std::string("equipment.") + p.name + "_capacity_bps", "must be > 0");
  }
  check(issues, eq.sd_power_w >= 0, "equipment.sd_power_w", "must be >= 0");
  check(issues, eq.sd_capacity_bits > 0, "equipment.sd_capacity_bits",
        "must be > 0");

  for (const auto& [name, dev] : s.device_profiles) {
    const std::string base = "user_space.device_profiles." + name;
    check(issues, dev.rho_idle_w >= 0, base + ".rho_idle_w", "must be >= 0");
    check(issues, dev.rho_tx_w >= 0, base + ".rho_tx_w", "must be >= 0");
    check(issues, dev.rho_rx_w >= 0, base + ".rho_rx_w", "must be >= 0");
    check(issues, dev.gamma_xg_j >= 0, base + ".gamma_xg_j", "must be >= 0");
    check(issues, dev.gamma_xr_j >= 0, base + ".gamma_xr_j", "must be >= 0");
    check(issues, dev.phy_rate_bps > 0, base + ".phy_rate_bps", "must be > 0");
    check(issues, dev.frame_payload_bits > 0, base + ".frame_payload_bits",
          "must be > 0");
  }

  // Topology: unique ids, exactly one origin root, >=1 edge, tree-shaped.
  std::size_t origins = 0, edges = 0;
  std::map<std::string, const CdnNode*> by_id;
  for (const auto& node : s.topology.nodes) {
    const std::string base = "topology.nodes." + node.id;
    if (!by_id.emplace(node.id, &node).second)
      issues.push_back({base + ".id", "duplicate node id"});
    if (node.tier == NodeTier::Origin) {
      ++origins;
      check(issues, node.parent.empty(), base + ".parent",
            "origin must not have a parent");
    } else {
      check(issues, !node.parent.empty(), base + ".parent",
            "non-origin node needs a parent");
    }
    if (node.tier == NodeTier::Edge) ++edges;
  }
  check(issues, origins == 1, "topology.nodes", "exactly one origin required");
  check(issues, edges >= 1, "topology.nodes", "at least one edge node required");
  for (const auto& node : s.topology.nodes) {
    if (node.parent.empty()) continue;
    const std::string base = "topology.nodes." + node.id;
    if (by_id.find(node.parent) == by_id.end()) {
      issues.push_back(
          {base + ".parent", "dangling reference to node '" + node.parent + "'"});
      continue;
    }
    // cycle check: the parent chain must terminate within |nodes| steps
    const CdnNode* cur = &node;
    std::size_t steps = 0;
    while (!cur->parent.empty() && steps <= s.topology.nodes.size()) {
      auto it = by_id.find(cur->parent);
      if (it == by_id.end()) break;
      cur = it->second;
      ++steps;
    }
    check(issues, cur->parent.empty(), base + ".parent",
          "parent links form a cycle");
  }

  std::map<std::string, bool> cluster_ids;
  for (const auto& cluster : s.topology.client_clusters) {
    const std::string base = "user_space.clusters." + cluster.id;
    if (!cluster_ids.emplace(cluster.id, true).second)
      issues.push_back({base + ".id", "duplicate cluster id"});
    auto it = by_id.find(cluster.attach);
    if (it == by_id.end()) {
      issues.push_back({base + ".attach",
                        "dangling reference to node '" + cluster.attach + "'"});
    } else {
      check(issues, it->second->tier == NodeTier::Edge, base + ".attach",
            "clusters must attach to an edge node");
    }
    check(issues, cluster.user_count >= 1, base + ".user_count", "must be >= 1");
    check(issues, cluster.request_rate_per_user_per_hr >= 0,
          base + ".request_rate_per_user_per_hr", "must be >= 0");
    double diurnal_sum = 0;
    bool diurnal_ok = true;
    for (double m : cluster.diurnal_profile) {
      if (m < 0) diurnal_ok = false;
      diurnal_sum += m;
    }
    check(issues, diurnal_ok, base + ".diurnal_profile",
          "multipliers must be >= 0");
    check(issues, diurnal_sum > 0, base + ".diurnal_profile",
          "must not be all zero");
    if (cluster.device_profile) {
      auto dev = s.device_profiles.find(*cluster.device_profile);
      if (dev == s.device_profiles.end()) {
        issues.push_back({base + ".device_profile",
                          "dangling reference to device profile '" +
                              *cluster.device_profile + "'"});
      } else {
        // the download airtime derivation needs bitrate <= PHY rate
        check(issues,
              s.content_space.bitrate_bps <= dev->second.phy_rate_bps,
              base + ".device_profile",
              "content_space.bitrate_bps exceeds the profile's phy_rate_bps");
      }
    }
  }
  check(issues, !s.topology.client_clusters.empty(), "user_space.clusters",
        "at least one client cluster required");

  const auto& cs = s.content_space;
  check(issues, cs.catalog_size >= 1, "content_space.catalog_size",
        "must be >= 1");
  check(issues, cs.zipf_exponent > 0, "content_space.zipf_exponent",
        "must be > 0");
  detail::validate_distribution(issues, cs.size_bits, "content_space.size_bits");
  detail::validate_distribution(issues, cs.lifetime_s,
                                "content_space.lifetime_s");
  check(issues, cs.bitrate_bps > 0, "content_space.bitrate_bps", "must be > 0");
  check(issues, cs.replication_count >= 1, "content_space.replication_count",
        "must be >= 1");
  if (cs.popularity_shape.kind == PopularityShape::Kind::ExponentialDecay)
    check(issues, cs.popularity_shape.half_life_s > 0,
          "content_space.popularity_shape.half_life_s", "must be > 0");
  check(issues, cs.decode.alpha_j >= 0, "content_space.decode.alpha_j",
        "must be >= 0");
  check(issues, cs.decode.beta_j_per_bit >= 0,
        "content_space.decode.beta_j_per_bit", "must be >= 0");
  check(issues,
        cs.initial_alive_fraction >= 0 && cs.initial_alive_fraction <= 1,
        "content_space.initial_alive_fraction", "must be in [0,1]");
  check(issues,
        cs.publish_window_fraction >= 0 && cs.publish_window_fraction <= 1,
        "content_space.publish_window_fraction", "must be in [0,1]");

  const auto& rep = s.policies.replication;
  if (rep.enabled) {
    check(issues, rep.period_s > 0, "policies.replication.period_s",
          "must be > 0");
    check(issues, rep.score_threshold_per_hr >= 0,
          "policies.replication.score_threshold_per_hr", "must be >= 0");
  }
  check(issues, rep.ewma_alpha > 0 && rep.ewma_alpha <= 1,
        "policies.replication.ewma_alpha", "must be in (0,1]");
  check(issues, rep.ewma_window_s > 0, "policies.replication.ewma_window_s",
        "must be > 0");

  check(issues, s.simulation.horizon_s > 0, "simulation.horizon_s",
        "must be > 0");
  check(issues, s.simulation.report_interval_s > 0,
        "simulation.report_interval_s", "must be > 0");

  return issues;
}

}  // namespace cdnsim
