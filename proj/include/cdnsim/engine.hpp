// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "cdnsim/cache.hpp"
#include "cdnsim/energy.hpp"
#include "cdnsim/report.hpp"
#include "cdnsim/scenario.hpp"
#include "cdnsim/version.hpp"
#include "cdnsim/workload.hpp"

namespace cdnsim {

/// Caches of every non-origin node, keyed by node id. The origin has no
/// entry: it holds every alive content by definition.
using NodeCaches = std::map<std::string, CacheState>;

/// Nearest ancestor of the cluster's edge node (walking edge -> regional(s)
/// -> origin) whose cache holds the content; the origin is the guaranteed
/// fallback.
inline std::string route_request(const Topology& topo, const NodeCaches& caches,
                                 const std::string& cluster_id,
                                 const std::string& content_id) {
  const ClientCluster* cluster = topo.find_cluster(cluster_id);
  if (cluster == nullptr)
    throw std::invalid_argument("route_request: unknown cluster " + cluster_id);
  for (const std::string& node_id : topo.root_path(*cluster)) {
    const CdnNode* node = topo.find_node(node_id);
    if (node->tier == NodeTier::Origin) return node_id;
    if (auto it = caches.find(node_id); it != caches.end() &&
                                        it->second.contains(content_id))
      return node_id;
  }
  throw std::logic_error("routing invariant violated: path has no origin");
}

/// Where one request was served from and what it cost.
struct RequestOutcome {
  std::string serving_node;
  NodeTier cache_level_hit = NodeTier::Origin;
  std::uint32_t hops = 0;
  TransportEnergy transport;
  double device_wh = 0;
  double decode_wh = 0;
  double duration_s = 0;
};

struct RunOptions {
  bool collect_requests = false;
};

namespace detail {

enum class EventKind : std::uint8_t {
  Request,
  Publish,
  Expire,
  ReplicationTick,
  ReportTick,
};

struct Event {
  double t = 0;
  std::uint64_t seq = 0;  // unique per run; total order tie-breaker
  EventKind kind = EventKind::Request;
  std::uint32_t cluster = 0;
  std::uint32_t content = 0;
  std::uint32_t user = 0;
  std::uint64_t tick = 0;
  bool has_content = false;

  bool operator>(const Event& other) const {
    if (t != other.t) return t > other.t;
    return seq > other.seq;
  }
};

// Trailing-hour download counter per content; supplies the D term of the
// transport model. Only user downloads are recorded, so the audit CSV alone
// suffices to replay D.
class DownloadWindow {
 public:
  double record_and_rate(double t) {
    times_.push_back(t);
    return rate(t);
  }

  double rate(double t) {
    while (!times_.empty() && times_.front() <= t - 3600.0) times_.pop_front();
    // clamped below at 1/hr so cold content cannot blow up the storage term
    return std::max<double>(1.0, static_cast<double>(times_.size()));
  }

 private:
  std::deque<double> times_;
};

}  // namespace detail

/// Discrete-event simulation of one scenario. A run is strictly
/// single-threaded and deterministic: a fixed (scenario, seed) pair yields a
/// bit-identical report. Internal invariant violations surface as
/// std::logic_error naming the invariant.
class Engine {
 public:
  explicit Engine(const Scenario& scenario, RunOptions options = {})
      : scenario_(scenario), options_(options) {}

  SimulationReport run() {
    setup();
    const double horizon = scenario_.simulation.horizon_s;
    while (!queue_.empty() && queue_.top().t <= horizon) {
      const detail::Event ev = queue_.top();
      queue_.pop();
      if (ev.t < last_event_t_)
        throw std::logic_error("event causality violated: time went backwards");
      last_event_t_ = ev.t;
      dispatch(ev);
    }
    return assemble();
  }

 private:
  using EventKind = detail::EventKind;

  void setup() {
    const auto& topo = scenario_.topology;
    const std::uint64_t seed = scenario_.simulation.seed;

    Rng catalog_rng = Rng::stream(seed, "catalog");
    catalog_ = build_catalog(scenario_.content_space,
                             scenario_.simulation.horizon_s, catalog_rng);
    alive_.assign(catalog_.size(), false);
    windows_.assign(catalog_.size(), {});
    content_wh_.assign(catalog_.size(), 0.0);
    content_requests_.assign(catalog_.size(), 0);
    predictor_.emplace(catalog_.size(),
                       scenario_.policies.replication.ewma_alpha,
                       scenario_.policies.replication.ewma_window_s);

    caches_.clear();
    for (const auto& node : topo.nodes)
      if (node.tier != NodeTier::Origin)
        caches_.emplace(node.id,
                        CacheState(node.cache_capacity_bits, node.cache_policy));

    cluster_paths_.clear();
    for (const auto& cluster : topo.client_clusters)
      cluster_paths_.push_back(topo.root_path(cluster));

    cluster_rngs_.clear();
    for (std::size_t i = 0; i < topo.client_clusters.size(); ++i)
      cluster_rngs_.push_back(
          Rng::stream(seed, "cluster", static_cast<std::uint64_t>(i)));

    per_cluster_.clear();
    for (const auto& cluster : topo.client_clusters)
      per_cluster_[cluster.id] = EnergyLedger{};

    // lifecycle events, in catalog order
    for (std::uint32_t i = 0; i < catalog_.size(); ++i) {
      const Content& c = catalog_[i];
      if (c.lifetime_s <= 0) continue;
      push_event(c.publish_s, EventKind::Publish, {.content = i});
      push_event(c.publish_s + c.lifetime_s, EventKind::Expire, {.content = i});
    }

    const double interval = scenario_.simulation.report_interval_s;
    if (interval <= scenario_.simulation.horizon_s)
      push_event(interval, EventKind::ReportTick, {.tick = 1});

    const auto& rep = scenario_.policies.replication;
    if (rep.enabled && rep.period_s <= scenario_.simulation.horizon_s)
      push_event(rep.period_s, EventKind::ReplicationTick, {.tick = 1});

    for (std::uint32_t i = 0; i < topo.client_clusters.size(); ++i)
      schedule_next_request(i, 0.0);
  }

  struct EventArgs {
    std::uint32_t cluster = 0;
    std::uint32_t content = 0;
    std::uint32_t user = 0;
    std::uint64_t tick = 0;
    bool has_content = false;
  };

  void push_event(double t, EventKind kind, EventArgs args) {
    detail::Event ev;
    ev.t = t;
    ev.seq = next_seq_++;
    ev.kind = kind;
    ev.cluster = args.cluster;
    ev.content = args.content;
    ev.user = args.user;
    ev.tick = args.tick;
    ev.has_content = args.has_content;
    queue_.push(ev);
  }

  void schedule_next_request(std::uint32_t cluster_index, double t) {
    const auto& cluster = scenario_.topology.client_clusters[cluster_index];
    auto draw = next_request(cluster, catalog_, t,
                             scenario_.simulation.horizon_s,
                             cluster_rngs_[cluster_index]);
    if (!draw) return;  // no further arrivals inside the horizon
    EventArgs args;
    args.cluster = cluster_index;
    args.user = draw->user;
    if (draw->content_index) {
      args.content = static_cast<std::uint32_t>(*draw->content_index);
      args.has_content = true;
    }
    push_event(draw->t, EventKind::Request, args);
  }

  void dispatch(const detail::Event& ev) {
    switch (ev.kind) {
      case EventKind::Publish:
        alive_[ev.content] = true;
        break;
      case EventKind::Expire:
        alive_[ev.content] = false;
        for (auto& [id, cache] : caches_) cache.erase(catalog_[ev.content].id);
        break;
      case EventKind::Request:
        handle_request(ev);
        break;
      case EventKind::ReplicationTick:
        handle_replication(ev);
        break;
      case EventKind::ReportTick:
        handle_report_tick(ev);
        break;
    }
  }

  // Resolves the serving node and prices the delivery; no state change.
  RequestOutcome charge_request(const ClientCluster& cluster,
                                const Content& content,
                                double downloads_per_hr) const {
    RequestOutcome outcome;
    outcome.serving_node =
        route_request(scenario_.topology, caches_, cluster.id, content.id);
    outcome.cache_level_hit =
        scenario_.topology.find_node(outcome.serving_node)->tier;
    outcome.hops = hop_count(scenario_.topology, outcome.serving_node, cluster.id);

    const TransportContext ctx(static_cast<double>(content.size_bits),
                               outcome.hops,
                               scenario_.content_space.replication_count,
                               downloads_per_hr, scenario_.equipment);
    outcome.transport = transport_storage_energy(ctx);
    outcome.duration_s =
        static_cast<double>(content.size_bits) / content.bitrate_bps;
    if (cluster.device_profile) {
      const auto& profile =
          scenario_.device_profiles.at(*cluster.device_profile);
      const auto device = device_download_energy(
          profile, static_cast<double>(content.size_bits), content.bitrate_bps,
          scenario_.policies.device_energy_mode);
      outcome.device_wh = device.energy_wh;
      outcome.duration_s = device.duration_s;
    }
    outcome.decode_wh =
        decode_energy(content.decode, static_cast<double>(content.size_bits));
    return outcome;
  }

  void handle_request(const detail::Event& ev) {
    const auto& cluster = scenario_.topology.client_clusters[ev.cluster];
    if (!ev.has_content) {
      cache_stats_.skipped_requests += 1;
      schedule_next_request(ev.cluster, ev.t);
      return;
    }
    const Content& content = catalog_[ev.content];

    const double downloads_per_hr = windows_[ev.content].record_and_rate(ev.t);
    const RequestOutcome outcome =
        charge_request(cluster, content, downloads_per_hr);
    if (outcome.cache_level_hit == NodeTier::Origin && !alive_[ev.content])
      throw std::logic_error(
          "liveness invariant violated: request routed to expired content");

    EnergyLedger& cluster_ledger = per_cluster_[cluster.id];
    charge(cluster_ledger, outcome.transport, outcome.device_wh,
           outcome.decode_wh);
    charge(aggregate_, outcome.transport, outcome.device_wh, outcome.decode_wh);
    cluster_ledger.request_count += 1;
    aggregate_.request_count += 1;
    content_wh_[ev.content] +=
        outcome.transport.total_wh + outcome.device_wh + outcome.decode_wh;
    content_requests_[ev.content] += 1;

    switch (outcome.cache_level_hit) {
      case NodeTier::Edge: cache_stats_.edge_hits += 1; break;
      case NodeTier::Regional: cache_stats_.regional_hits += 1; break;
      case NodeTier::Origin: cache_stats_.origin_serves += 1; break;
    }

    if (scenario_.policies.caching_enabled) {
      if (auto it = caches_.find(outcome.serving_node); it != caches_.end())
        it->second.touch(content.id, ev.t);
      // inclusive fill: admit at every tier below the serving node
      for (const std::string& node_id : cluster_paths_[ev.cluster]) {
        if (node_id == outcome.serving_node) break;
        caches_.at(node_id).admit(content.id, content.size_bits, ev.t);
      }
    }

    predictor_->update(ev.content, ev.t);

    if (options_.collect_requests) {
      RequestRecord record;
      record.t_s = ev.t;
      record.cluster_id = cluster.id;
      record.content_id = content.id;
      record.serving_node = outcome.serving_node;
      record.hops = outcome.hops;
      record.size_bits = content.size_bits;
      record.transport_wh = outcome.transport.total_wh;
      record.device_wh = outcome.device_wh;
      record.decode_wh = outcome.decode_wh;
      requests_.push_back(std::move(record));
    }

    schedule_next_request(ev.cluster, ev.t);
  }

  void handle_replication(const detail::Event& ev) {
    const auto& rep = scenario_.policies.replication;
    const auto& topo = scenario_.topology;
    for (std::uint32_t ci = 0; ci < catalog_.size(); ++ci) {
      if (!alive_[ci]) continue;
      if (predictor_->score(ci, ev.t) <= rep.score_threshold_per_hr) continue;
      const Content& content = catalog_[ci];
      for (const auto& node : topo.nodes) {
        if (node.tier != NodeTier::Edge) continue;
        CacheState& cache = caches_.at(node.id);
        if (cache.contains(content.id)) continue;
        if (content.size_bits > cache.capacity_bits()) continue;  // never fits
        const std::string holder = nearest_holder(node, content.id);
        const std::uint32_t hops = hop_count_between(topo, holder, node.id);
        const TransportContext ctx(static_cast<double>(content.size_bits), hops,
                                   scenario_.content_space.replication_count,
                                   windows_[ci].rate(ev.t), scenario_.equipment);
        const TransportEnergy push = transport_storage_energy(ctx);
        charge(replication_, push, 0, 0);
        charge(aggregate_, push, 0, 0);
        cache.admit(content.id, content.size_bits, ev.t);
        replication_pushes_ += 1;
      }
    }
    const double next_t = static_cast<double>(ev.tick + 1) * rep.period_s;
    if (next_t <= scenario_.simulation.horizon_s)
      push_event(next_t, EventKind::ReplicationTick, {.tick = ev.tick + 1});
  }

  // Nearest strict ancestor of `node` holding the content (origin fallback).
  std::string nearest_holder(const CdnNode& node,
                             const std::string& content_id) const {
    const auto& topo = scenario_.topology;
    const CdnNode* cur = topo.find_node(node.parent);
    while (cur != nullptr) {
      if (cur->tier == NodeTier::Origin) return cur->id;
      if (caches_.at(cur->id).contains(content_id)) return cur->id;
      cur = topo.find_node(cur->parent);
    }
    throw std::logic_error("routing invariant violated: path has no origin");
  }

  void handle_report_tick(const detail::Event& ev) {
    TimeSeriesPoint point;
    point.t_s = ev.t;
    point.cumulative_wh = aggregate_.by_class;
    point.total_wh = aggregate_.total_wh;
    const std::uint64_t served = aggregate_.request_count;
    point.hit_rate =
        served == 0 ? 0.0
                    : static_cast<double>(cache_stats_.edge_hits +
                                          cache_stats_.regional_hits) /
                          static_cast<double>(served);
    timeseries_.push_back(point);
    const double interval = scenario_.simulation.report_interval_s;
    const double next_t = static_cast<double>(ev.tick + 1) * interval;
    if (next_t <= scenario_.simulation.horizon_s)
      push_event(next_t, EventKind::ReportTick, {.tick = ev.tick + 1});
  }

  void charge(EnergyLedger& ledger, const TransportEnergy& transport,
              double device_wh, double decode_wh) {
    ledger.add(EnergyClass::Switching, transport.switching_wh);
    ledger.add(EnergyClass::Gateway, transport.gateway_wh);
    ledger.add(EnergyClass::ProviderEdge, transport.provider_edge_wh);
    ledger.add(EnergyClass::Core, transport.core_wh);
    ledger.add(EnergyClass::Wdm, transport.wdm_wh);
    ledger.add(EnergyClass::Server, transport.server_wh);
    ledger.add(EnergyClass::Storage, transport.storage_wh);
    if (device_wh > 0) ledger.add(EnergyClass::WirelessDevice, device_wh);
    if (decode_wh > 0) ledger.add(EnergyClass::Decoding, decode_wh);
  }

  SimulationReport assemble() {
    SimulationReport report;
    report.aggregate = aggregate_;
    report.per_cluster = per_cluster_;
    report.replication = replication_;
    report.replication_pushes = replication_pushes_;
    report.cache = cache_stats_;
    report.timeseries = std::move(timeseries_);
    report.requests = std::move(requests_);
    report.meta.seed = scenario_.simulation.seed;
    report.meta.scenario_hash = scenario_.source_hash;
    report.meta.version = kVersion;
    report.meta.horizon_s = scenario_.simulation.horizon_s;
    report.meta.report_interval_s = scenario_.simulation.report_interval_s;

    std::vector<std::size_t> order(catalog_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (content_wh_[a] != content_wh_[b])
        return content_wh_[a] > content_wh_[b];
      return catalog_[a].id < catalog_[b].id;
    });
    const std::size_t top_k = std::min<std::size_t>(20, order.size());
    for (std::size_t i = 0; i < top_k; ++i) {
      const std::size_t idx = order[i];
      if (content_requests_[idx] == 0) break;
      report.top_contents.push_back(
          {catalog_[idx].id, content_wh_[idx], content_requests_[idx]});
    }

    double class_sum = 0;
    for (double v : aggregate_.by_class) class_sum += v;
    const double scale = std::max(1.0, std::abs(aggregate_.total_wh));
    if (std::abs(class_sum - aggregate_.total_wh) > 1e-9 * scale)
      throw std::logic_error(
          "ledger conservation violated: total_wh != sum of classes");
    return report;
  }

  const Scenario& scenario_;
  RunOptions options_;

  std::vector<Content> catalog_;
  std::vector<bool> alive_;
  std::vector<detail::DownloadWindow> windows_;
  std::vector<double> content_wh_;
  std::vector<std::uint64_t> content_requests_;
  std::optional<PopularityPredictor> predictor_;
  NodeCaches caches_;
  std::vector<std::vector<std::string>> cluster_paths_;
  std::vector<Rng> cluster_rngs_;

  std::priority_queue<detail::Event, std::vector<detail::Event>,
                      std::greater<detail::Event>>
      queue_;
  std::uint64_t next_seq_ = 0;
  double last_event_t_ = 0;

  EnergyLedger aggregate_;
  std::map<std::string, EnergyLedger> per_cluster_;
  EnergyLedger replication_;
  std::uint64_t replication_pushes_ = 0;
  CacheStats cache_stats_;
  std::vector<TimeSeriesPoint> timeseries_;
  std::vector<RequestRecord> requests_;
};

/// Runs one scenario to completion.
inline SimulationReport run(const Scenario& scenario, RunOptions options = {}) {
  return Engine(scenario, options).run();
}

}  // namespace cdnsim
