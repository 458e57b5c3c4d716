// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cdnsim/engine.hpp"
#include "cdnsim/scenario_json.hpp"
#include "oracles.hpp"
#include "scenario_builders.hpp"

using namespace cdnsim;
using nlohmann::json;

namespace {

Scenario from_doc(const json& doc) { return parse_scenario_text(doc.dump()); }

double class_sum(const EnergyLedger& ledger) {
  double sum = 0;
  for (double v : ledger.by_class) sum += v;
  return sum;
}

// transport classes of Eq. 1 (everything except device and decoding)
double transport_wh(const SimulationReport& report) {
  const auto& ledger = report.aggregate;
  return ledger.cls(EnergyClass::Switching) + ledger.cls(EnergyClass::Gateway) +
         ledger.cls(EnergyClass::ProviderEdge) + ledger.cls(EnergyClass::Core) +
         ledger.cls(EnergyClass::Wdm) + ledger.cls(EnergyClass::Server) +
         ledger.cls(EnergyClass::Storage);
}

void check_conservation(const SimulationReport& report) {
  REQUIRE(oracle::close_rel(report.aggregate.total_wh,
                            class_sum(report.aggregate), 1e-9));
  EnergyLedger merged = report.replication;
  for (const auto& [id, ledger] : report.per_cluster) merged.merge_in(ledger);
  REQUIRE(oracle::close_rel(report.aggregate.total_wh, merged.total_wh, 1e-9));
  REQUIRE(report.aggregate.request_count == merged.request_count);
}

}  // namespace

TEST_CASE("zero request rate everywhere yields an empty run") {
  json doc = testdoc::tiny_doc();
  doc["user_space"]["clusters"][0]["request_rate_per_user_per_hr"] = 0.0;
  const SimulationReport report = run(from_doc(doc));
  REQUIRE(report.aggregate.request_count == 0);
  REQUIRE(report.aggregate.total_wh == 0.0);
  REQUIRE(report.cache.skipped_requests == 0);
  REQUIRE(report.timeseries.size() == 4);  // 3600 / 900
  REQUIRE(report.timeseries.back().total_wh == 0.0);
}

TEST_CASE("single origin-pinned content: total equals N times the per-request cost") {
  json doc = testdoc::tiny_doc();
  doc["equipment"]["sd_power_w"] = 0;  // storage off so cost is D-independent
  RunOptions options;
  options.collect_requests = true;
  const Scenario scenario = from_doc(doc);
  const SimulationReport report = run(scenario, options);
  REQUIRE(report.aggregate.request_count > 0);

  // every request: B = 4e9, H = 4 (edge label), wired cluster, zero decode
  const double per_request = oracle::transport_storage_wh(
      4e9, 4, 2, 1.0, 150, 48e9, 1100, 660e9, 4200, 560e9, 10000, 1.28e12, 811,
      40e9, 500, 40e9, 0, 1.2e15);
  const double expected =
      static_cast<double>(report.aggregate.request_count) * per_request;
  REQUIRE(oracle::close_rel(report.aggregate.total_wh, expected, 1e-9));
  REQUIRE(report.cache.edge_hits == 0);  // zero-capacity edge cache
  REQUIRE(report.cache.origin_serves == report.aggregate.request_count);
  REQUIRE(report.aggregate.cls(EnergyClass::WirelessDevice) == 0.0);
  for (const auto& row : report.requests) {
    REQUIRE(row.hops == 4);
    REQUIRE(row.serving_node == "origin");
    REQUIRE(row.device_wh == 0.0);
  }
}

TEST_CASE("same seed twice produces byte-identical outputs") {
  const json doc = testdoc::tiered_doc(60, 1.0, 3600, 7, true, true);
  RunOptions options;
  options.collect_requests = true;
  const SimulationReport a = run(from_doc(doc), options);
  const SimulationReport b = run(from_doc(doc), options);
  REQUIRE(summary_json_string(a) == summary_json_string(b));
  REQUIRE(timeseries_csv_string(a) == timeseries_csv_string(b));
  REQUIRE(requests_csv_string(a) == requests_csv_string(b));
}

TEST_CASE("different seeds diverge") {
  json doc = testdoc::tiered_doc(60, 1.0, 3600, 7, true, false);
  const SimulationReport a = run(from_doc(doc));
  doc["simulation"]["seed"] = 8;
  const SimulationReport b = run(from_doc(doc));
  REQUIRE(summary_json_string(a) != summary_json_string(b));
}

TEST_CASE("aggregate ledger equals per-cluster merge plus replication") {
  const json doc = testdoc::tiered_doc(80, 1.0, 7200, 11, true, true);
  const SimulationReport report = run(from_doc(doc));
  REQUIRE(report.aggregate.request_count > 0);
  check_conservation(report);
}

TEST_CASE("request rows carry definitionally consistent hops") {
  const json doc = testdoc::tiered_doc(40, 1.0, 3600, 3, true, false);
  const Scenario scenario = from_doc(doc);
  RunOptions options;
  options.collect_requests = true;
  const SimulationReport report = run(scenario, options);
  REQUIRE(!report.requests.empty());
  for (const auto& row : report.requests)
    REQUIRE(hop_count(scenario.topology, row.serving_node, row.cluster_id) ==
            row.hops);
}

TEST_CASE("edge caching never increases transport energy (paired seeds)") {
  for (std::uint64_t seed : {21, 22, 23}) {
    const SimulationReport with_caches =
        run(from_doc(testdoc::tiered_doc(50, 1.0, 3600, seed, true, false)));
    const SimulationReport without_caches =
        run(from_doc(testdoc::tiered_doc(50, 1.0, 3600, seed, false, false)));
    // identical workload on both sides of the pair
    REQUIRE(with_caches.aggregate.request_count ==
            without_caches.aggregate.request_count);
    REQUIRE(without_caches.cache.edge_hits == 0);
    REQUIRE(with_caches.cache.edge_hits > 0);
    REQUIRE(transport_wh(with_caches) <= transport_wh(without_caches));
    REQUIRE(transport_wh(with_caches) < transport_wh(without_caches));
    // device and decode energy are cache-independent
    REQUIRE(with_caches.aggregate.cls(EnergyClass::WirelessDevice) ==
            without_caches.aggregate.cls(EnergyClass::WirelessDevice));
    REQUIRE(with_caches.aggregate.cls(EnergyClass::Decoding) ==
            without_caches.aggregate.cls(EnergyClass::Decoding));
  }
}

TEST_CASE("expired catalog leaves later arrivals skipped") {
  json doc = testdoc::tiny_doc();
  doc["content_space"]["catalog_size"] = 3;
  doc["content_space"]["lifetime_s"] = {{"kind", "constant"}, {"value", 600}};
  doc["content_space"]["initial_alive_fraction"] = 1.0;
  doc["user_space"]["clusters"][0]["request_rate_per_user_per_hr"] = 20.0;
  const SimulationReport report = run(from_doc(doc));
  REQUIRE(report.aggregate.request_count > 0);
  REQUIRE(report.cache.skipped_requests > 0);
  check_conservation(report);
}

TEST_CASE("replication pushes hot content to empty edges and prices each push") {
  json doc = testdoc::tiered_doc(1, 1.0, 1800, 5, true, true);
  // single content, only cluster-1 generates requests
  for (int c = 1; c < 4; ++c)
    doc["user_space"]["clusters"][c]["request_rate_per_user_per_hr"] = 0.0;
  doc["content_space"]["lifetime_s"] = {{"kind", "constant"}, {"value", 86400}};
  doc["content_space"]["initial_alive_fraction"] = 1.0;
  RunOptions options;
  options.collect_requests = true;
  const SimulationReport report = run(from_doc(doc), options);

  // after the first tick at t=900 the three idle edges each took one push
  REQUIRE(report.replication_pushes == 3);
  REQUIRE(report.replication.total_wh > 0.0);
  REQUIRE(report.replication.request_count == 0);

  // reprice the pushes independently: B from the audit rows, D = trailing-hour
  // request count at the tick, holder-derived hop counts
  REQUIRE(!report.requests.empty());
  const double size_bits = static_cast<double>(report.requests[0].size_bits);
  double downloads_before_tick = 0;
  for (const auto& row : report.requests)
    if (row.t_s > 900.0 - 3600.0 && row.t_s <= 900.0) downloads_before_tick += 1;
  REQUIRE(downloads_before_tick >= 1.0);
  // edge-2 pulls from reg-1 (filled by cluster-1 traffic): H = 2
  // edge-3 and edge-4 pull from the origin through reg-2: H = 3+5 and 2+5
  double expected = 0;
  for (const double hops : {2.0, 8.0, 7.0})
    expected += oracle::transport_storage_wh(
        size_bits, hops, 2, downloads_before_tick, 150, 48e9, 1100, 660e9,
        4200, 560e9, 10000, 1.28e12, 811, 40e9, 500, 40e9, 5000, 1.2e15);
  REQUIRE(oracle::close_rel(report.replication.total_wh, expected, 1e-9));
  check_conservation(report);
}

TEST_CASE("an unreachable threshold never replicates") {
  json doc = testdoc::tiered_doc(30, 1.0, 3600, 13, true, true);
  doc["policies"]["replication"]["score_threshold_per_hr"] = 1e18;
  const SimulationReport report = run(from_doc(doc));
  REQUIRE(report.replication_pushes == 0);
  REQUIRE(report.replication.total_wh == 0.0);
}

TEST_CASE("route_request picks the nearest holder on random trees") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    // random tree, <= 8 nodes, origin at index 0, cluster on a random edge
    const std::size_t n = 2 + rng.uniform_below(7);
    Topology topo;
    std::vector<std::size_t> parent(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      CdnNode node;
      node.id = "n" + std::to_string(i);
      if (i == 0) {
        node.tier = NodeTier::Origin;
      } else {
        parent[i] = rng.uniform_below(i);
        node.parent = "n" + std::to_string(parent[i]);
        node.tier = (i + 1 == n) ? NodeTier::Edge : NodeTier::Regional;
        node.hop_contribution = 1;
      }
      topo.nodes.push_back(node);
    }
    ClientCluster cluster;
    cluster.id = "cl";
    cluster.attach = "n" + std::to_string(n - 1);
    topo.client_clusters.push_back(cluster);
    topo.finalize();

    // random cache placement over non-origin nodes
    NodeCaches caches;
    std::vector<bool> holds(n, false);
    for (std::size_t i = 1; i < n; ++i) {
      CacheState cache(10, CachePolicy::Lru);
      if (rng.uniform_below(2) == 1) {
        cache.admit("x", 1, 0.0);
        holds[i] = true;
      }
      caches.emplace("n" + std::to_string(i), std::move(cache));
    }

    // brute force: scan ancestors from the attachment upward
    std::size_t expected = 0;  // origin fallback
    std::size_t cur = n - 1;
    while (true) {
      if (holds[cur]) {
        expected = cur;
        break;
      }
      if (cur == 0) break;
      cur = parent[cur];
    }
    REQUIRE(route_request(topo, caches, "cl", "x") ==
            "n" + std::to_string(expected));
  }
}

TEST_CASE("content cached at the edge serves with zero path hops") {
  json doc = testdoc::tiny_doc();
  doc["topology"]["nodes"][1]["cache_capacity_bits"] = 1e12;
  RunOptions options;
  options.collect_requests = true;
  const SimulationReport report = run(from_doc(doc), options);
  REQUIRE(report.aggregate.request_count > 1);
  REQUIRE(report.cache.edge_hits == report.aggregate.request_count - 1);
  bool first = true;
  for (const auto& row : report.requests) {
    if (first) {
      REQUIRE(row.serving_node == "origin");  // cold start
      first = false;
    } else {
      REQUIRE(row.serving_node == "edge-1");
      REQUIRE(row.hops == 0);
    }
  }
}

TEST_CASE("timeseries is sampled on the report grid and ends at the total") {
  const json doc = testdoc::tiered_doc(40, 1.0, 3600, 17, true, false);
  const SimulationReport report = run(from_doc(doc));
  REQUIRE(report.timeseries.size() == 6);  // 3600 / 600
  double prev_total = -1;
  for (std::size_t i = 0; i < report.timeseries.size(); ++i) {
    const auto& point = report.timeseries[i];
    REQUIRE(point.t_s == 600.0 * static_cast<double>(i + 1));
    REQUIRE(point.total_wh >= prev_total);
    prev_total = point.total_wh;
  }
  REQUIRE(oracle::close_rel(report.timeseries.back().total_wh,
                            report.aggregate.total_wh, 1e-12));
}
