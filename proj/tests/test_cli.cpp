// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdnsim/cli.hpp"
#include "scenario_builders.hpp"

using namespace cdnsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cdnsim_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_doc(const fs::path& dir, const std::string& name,
                      const json& doc) {
  const fs::path path = dir / name;
  std::ofstream out(path);
  out << doc.dump(2) << "\n";
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("validate: valid document prints OK and exits 0") {
  const auto dir = fresh_dir("validate_ok");
  const auto path = write_doc(dir, "ok.json", testdoc::tiny_doc());
  std::ostringstream out, err;
  REQUIRE(cmd_validate(path, out, err) == kExitOk);
  REQUIRE(out.str() == "OK\n");
  REQUIRE(err.str().empty());
}

TEST_CASE("validate: constraint violations exit 2 and name the field") {
  const auto dir = fresh_dir("validate_bad");
  json doc = testdoc::tiny_doc();
  doc["equipment"]["es_capacity_bps"] = 0;
  const auto path = write_doc(dir, "bad.json", doc);
  std::ostringstream out, err;
  REQUIRE(cmd_validate(path, out, err) == kExitValidation);
  REQUIRE(err.str().find("es_capacity_bps") != std::string::npos);
  REQUIRE(err.str().find(": ") != std::string::npos);
}

TEST_CASE("validate: missing file exits 1") {
  std::ostringstream out, err;
  REQUIRE(cmd_validate("/no/such/file.json", out, err) == kExitRuntime);
  REQUIRE(!err.str().empty());
}

TEST_CASE("simulate writes the report files and a stable summary line") {
  const auto dir = fresh_dir("simulate_basic");
  const auto path = write_doc(dir, "scn.json", testdoc::tiny_doc());

  SimulateArgs args;
  args.scenario_path = path;
  args.out_dir = (dir / "out").string();
  args.requests_csv = true;
  std::ostringstream out, err;
  REQUIRE(cmd_simulate(args, out, err) == kExitOk);
  REQUIRE(fs::exists(dir / "out" / "summary.json"));
  REQUIRE(fs::exists(dir / "out" / "timeseries.csv"));
  REQUIRE(fs::exists(dir / "out" / "requests.csv"));

  // the printed total matches the written summary byte-for-byte
  const json summary = json::parse(slurp(dir / "out" / "summary.json"));
  const std::string total =
      fmt_g12(summary["aggregate"]["total_wh"].get<double>());
  REQUIRE(out.str().find("total_wh=" + total + " ") != std::string::npos);
}

TEST_CASE("simulate twice with the same seed is byte-identical") {
  const auto dir = fresh_dir("simulate_repeat");
  const auto path = write_doc(dir, "scn.json",
                              testdoc::tiered_doc(30, 1.0, 1800, 42, true, true));
  for (const char* sub : {"a", "b"}) {
    SimulateArgs args;
    args.scenario_path = path;
    args.out_dir = (dir / sub).string();
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(args, out, err) == kExitOk);
  }
  REQUIRE(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
  REQUIRE(slurp(dir / "a" / "timeseries.csv") ==
          slurp(dir / "b" / "timeseries.csv"));
}

TEST_CASE("simulate --seed overrides the document seed") {
  const auto dir = fresh_dir("simulate_seed");
  const auto path = write_doc(dir, "scn.json", testdoc::tiny_doc());
  SimulateArgs args;
  args.scenario_path = path;
  args.out_dir = (dir / "out").string();
  args.seed = 777;
  std::ostringstream out, err;
  REQUIRE(cmd_simulate(args, out, err) == kExitOk);
  const json summary = json::parse(slurp(dir / "out" / "summary.json"));
  REQUIRE(summary["meta"]["seed"] == 777);
}

TEST_CASE("simulate propagates validation failures as exit 2") {
  const auto dir = fresh_dir("simulate_invalid");
  json doc = testdoc::tiny_doc();
  doc["simulation"]["horizon_s"] = 0;
  const auto path = write_doc(dir, "scn.json", doc);
  SimulateArgs args;
  args.scenario_path = path;
  args.out_dir = (dir / "out").string();
  std::ostringstream out, err;
  REQUIRE(cmd_simulate(args, out, err) == kExitValidation);
  REQUIRE(err.str().find("horizon_s") != std::string::npos);
}

TEST_CASE("dotted parameter paths resolve objects and array indices") {
  json doc = testdoc::tiered_doc(10, 1.0, 600, 1, true, false);
  REQUIRE(resolve_param_path(doc, "content_space.zipf_exponent") != nullptr);
  REQUIRE(resolve_param_path(doc, "topology.nodes.3.cache_capacity_bits") !=
          nullptr);
  REQUIRE(resolve_param_path(doc, "content_space.nope") == nullptr);
  REQUIRE(resolve_param_path(doc, "topology.nodes.99.id") == nullptr);
  REQUIRE(parse_sweep_value("1.5").is_number_float());
  REQUIRE(parse_sweep_value("false").is_boolean());
  REQUIRE(parse_sweep_value("LFU").is_string());
}

TEST_CASE("sweep: unresolvable parameter exits 2 before any run") {
  const auto dir = fresh_dir("sweep_badparam");
  const auto path = write_doc(dir, "scn.json", testdoc::tiny_doc());
  SweepArgs args;
  args.scenario_path = path;
  args.param_path = "content_space.does_not_exist";
  args.values = {"1"};
  args.seeds = {1};
  args.out_dir = (dir / "out").string();
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(args, out, err) == kExitValidation);
  REQUIRE(!fs::exists(dir / "out" / "sweep.csv"));
}

TEST_CASE("sweep of one value and one seed reproduces cmd_simulate output") {
  const auto dir = fresh_dir("sweep_single");
  const json doc = testdoc::tiered_doc(20, 1.0, 1200, 5, true, false);
  const auto path = write_doc(dir, "scn.json", doc);

  SweepArgs sweep;
  sweep.scenario_path = path;
  sweep.param_path = "content_space.zipf_exponent";
  sweep.values = {"1.0"};
  sweep.seeds = {99};
  sweep.out_dir = (dir / "sweep").string();
  sweep.jobs = 1;
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(sweep, out, err) == kExitOk);

  SimulateArgs sim;
  sim.scenario_path = path;
  sim.out_dir = (dir / "direct").string();
  sim.seed = 99;
  std::ostringstream sim_out, sim_err;
  REQUIRE(cmd_simulate(sim, sim_out, sim_err) == kExitOk);

  REQUIRE(slurp(dir / "sweep" / "value0_seed99" / "summary.json") ==
          slurp(dir / "direct" / "summary.json"));
}

TEST_CASE("sweep rows are ordered by value then seed, independent of jobs") {
  const auto dir = fresh_dir("sweep_order");
  const auto path = write_doc(dir, "scn.json",
                              testdoc::tiered_doc(15, 1.0, 900, 2, true, false));
  SweepArgs args;
  args.scenario_path = path;
  args.param_path = "content_space.zipf_exponent";
  args.values = {"0.8", "1.2"};
  args.seeds = {4, 3};
  args.out_dir = (dir / "out").string();
  args.jobs = 4;
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(args, out, err) == kExitOk);

  std::istringstream csv(slurp(dir / "out" / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  REQUIRE(line.rfind("value,seed,status,", 0) == 0);
  std::vector<std::string> prefixes;
  while (std::getline(csv, line))
    prefixes.push_back(line.substr(0, line.find(",ok")));
  REQUIRE(prefixes ==
          std::vector<std::string>{"0.8,4", "0.8,3", "1.2,4", "1.2,3"});

  // rerunning with one worker produces the identical csv
  SweepArgs serial = args;
  serial.out_dir = (dir / "serial").string();
  serial.jobs = 1;
  std::ostringstream out2, err2;
  REQUIRE(cmd_sweep(serial, out2, err2) == kExitOk);
  REQUIRE(slurp(dir / "out" / "sweep.csv") ==
          slurp(dir / "serial" / "sweep.csv"));
}

TEST_CASE("sweep records failing runs and exits 1") {
  const auto dir = fresh_dir("sweep_fail");
  const auto path = write_doc(dir, "scn.json", testdoc::tiny_doc());
  SweepArgs args;
  args.scenario_path = path;
  args.param_path = "content_space.zipf_exponent";
  args.values = {"1.0", "-1"};  // second value violates validation
  args.seeds = {1};
  args.out_dir = (dir / "out").string();
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(args, out, err) == kExitRuntime);
  const std::string csv = slurp(dir / "out" / "sweep.csv");
  REQUIRE(csv.find("1.0,1,ok") != std::string::npos);
  REQUIRE(csv.find("-1,1,error") != std::string::npos);
  REQUIRE(fs::exists(dir / "out" / "value1_seed1" / "error.txt"));
}

TEST_CASE("sweeping the caching flag lowers transport energy when enabled") {
  const auto dir = fresh_dir("sweep_caching");
  const auto path = write_doc(dir, "scn.json",
                              testdoc::tiered_doc(40, 1.0, 1800, 6, true, false));
  SweepArgs args;
  args.scenario_path = path;
  args.param_path = "policies.caching_enabled";
  args.values = {"false", "true"};
  args.seeds = {10};
  args.out_dir = (dir / "out").string();
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(args, out, err) == kExitOk);
  const json off =
      json::parse(slurp(dir / "out" / "value0_seed10" / "summary.json"));
  const json on =
      json::parse(slurp(dir / "out" / "value1_seed10" / "summary.json"));
  const auto transport = [](const json& summary) {
    const auto& agg = summary["aggregate"];
    return agg["switching_wh"].get<double>() + agg["gateway_wh"].get<double>() +
           agg["provider_edge_wh"].get<double>() +
           agg["core_wh"].get<double>() + agg["wdm_wh"].get<double>() +
           agg["server_wh"].get<double>() + agg["storage_wh"].get<double>();
  };
  REQUIRE(transport(on) < transport(off));
}
