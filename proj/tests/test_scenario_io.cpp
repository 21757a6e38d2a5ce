#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "srts/scenario_io.hpp"

using namespace srts;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Fresh per-test scratch directory under the system temp root.
fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "srts_io_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& name,
                      const std::string& text) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
  return path;
}

// Field path carried by the ConfigError a callable throws, or a marker.
template <typename Fn>
std::string config_error_field(Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.field;
  } catch (...) {
    return "<other exception>";
  }
  return "<no throw>";
}

int run_cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"srts"};
  argv.insert(argv.end(), args.begin(), args.end());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

// Redirects std::cout for the lifetime of the capture.
struct CoutCapture {
  std::ostringstream buf;
  std::streambuf* old;
  CoutCapture() : old(std::cout.rdbuf(buf.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(old); }
  std::string str() const { return buf.str(); }
};

// Small diagonal commuter scenario: completes some missions within the
// horizon and leaves others in flight, so routes.csv shows both statuses.
const char* kMicroScenario = R"({
  "geometry": {"width_cells": 6, "height_cells": 6},
  "launch_areas": [{"rect": [0, 0, 0, 0], "probability": 1.0}],
  "landing_areas": [{"rect": [5, 5, 5, 5]}],
  "stations": [{"x_m": 54.0, "y_m": 54.0, "channels": 64}],
  "generation_interval_s": 1.0,
  "sim_length_steps": 20,
  "router": "srts",
  "seed": 5,
  "replications": 2,
  "snapshot_steps": [2, 10]
})";

}  // namespace

TEST_CASE("empty config fills every section with defaults") {
  const Scenario s = parse_scenario_json("{}");

  CHECK(s.geometry.width_cells == 528);
  CHECK(s.geometry.height_cells == 528);
  CHECK(s.geometry.cell_size_m == 18.0);
  CHECK(s.geometry.cruise_speed_mps == 18.0);

  REQUIRE(s.launch_areas.size() == 4);
  CHECK(s.launch_areas[0].x0 == 33);
  CHECK(s.launch_areas[0].y0 == 33);
  CHECK(s.launch_areas[0].x1 == 98);
  CHECK(s.launch_areas[0].y1 == 98);
  CHECK(s.launch_areas[0].launch_probability == 0.9);
  CHECK(s.launch_areas[3].x0 == 429);
  CHECK(s.launch_areas[3].y1 == 494);
  CHECK(s.launch_areas[3].launch_probability == 0.6);

  REQUIRE(s.landing_areas.size() == 4);
  CHECK(s.landing_areas[0].x0 == 231);
  CHECK(s.landing_areas[0].y0 == 33);
  CHECK(s.landing_areas[0].x1 == 296);
  CHECK(s.landing_areas[0].y1 == 98);
  CHECK(s.no_fly_zones.empty());

  REQUIRE(s.stations.size() == 10);
  CHECK(s.stations[0].position_m.x == doctest::Approx(950.4));
  CHECK(s.stations[0].position_m.y == doctest::Approx(2376.0));
  CHECK(s.stations[9].position_m.x == doctest::Approx(8553.6));
  CHECK(s.stations[9].position_m.y == doctest::Approx(7128.0));
  for (const BaseStation& st : s.stations) CHECK(st.channel_count == 8);

  CHECK(s.path_loss.ref_distance_m == 1.0);
  CHECK(s.path_loss.ref_loss_db == 38.0);
  CHECK(s.path_loss.exponent_los == 3.0);
  CHECK(s.path_loss.exponent_nlos == 3.5);
  CHECK(s.path_loss.los_probability == 0.9);
  CHECK(s.path_loss.shadowing_db == 0.0);
  CHECK(s.path_loss.loss_threshold_db == 140.0);

  CHECK(s.generation_interval_s == 10.0);
  CHECK(s.sim_length_steps == 20000);
  CHECK(s.separation_m == 18.0);
  CHECK(s.router == RouterKind::Srts);
  CHECK_FALSE(s.connectivity_check);
  CHECK(s.turn_penalty_weight == -1.0);
  CHECK(s.resolved_turn_penalty() == doctest::Approx(1.0 / 2112.0));
  CHECK(s.allow_wait);
  CHECK(s.deadline.manhattan_factor == 4);
  CHECK(s.deadline.slack_steps == 64);
  CHECK(s.reactive.max_speed_mps == 18.0);
  CHECK(s.seed == 1);
  CHECK(s.replications == 10);
  CHECK_FALSE(s.retry_rejected);
  CHECK(s.burn_in_steps == 0);
  CHECK(s.snapshot_steps.empty());
  CHECK(s.snapshot_fractions ==
        std::vector<double>{0.025, 0.25, 0.5, 0.99});
  CHECK(s.out_dir == "out");
}

TEST_CASE("config errors name the offending field path") {
  auto field_of = [](const char* text) {
    return config_error_field([&] { parse_scenario_json(text); });
  };

  CHECK(field_of(R"({"bogus": 1})") == "bogus");
  CHECK(field_of(R"({"geometry": {"widht_cells": 4}})") ==
        "geometry.widht_cells");
  CHECK(field_of(R"({"geometry": {"width_cells": 4.5}})") ==
        "geometry.width_cells");
  CHECK(field_of(R"({"launch_areas": [{"rect": [1, 2, 3]}]})") ==
        "launch_areas[0].rect");
  CHECK(field_of(R"({"stations": [{"x_m": 1, "y_m": 2, "ch": 3}]})") ==
        "stations[0].ch");
  CHECK(field_of(R"({"deadline": {"manhattan_factor": 0}})") ==
        "deadline.manhattan_factor");
  CHECK(field_of(R"({"router": "dijkstra"})") == "router");
  CHECK(field_of(R"({"turn_penalty_weight": "x"})") ==
        "turn_penalty_weight");
  CHECK(field_of(R"({"turn_penalty_weight": 1.5})") ==
        "turn_penalty_weight");
  CHECK(field_of(R"({"snapshot_fractions": ["a"]})") ==
        "snapshot_fractions");
  CHECK(field_of(R"({"out_dir": 7})") == "out_dir");
  CHECK(field_of(R"([1, 2])") == "");
}

TEST_CASE("json parse errors report origin and line") {
  const std::string broken = "{\n  \"geometry\": {,}\n}";
  const std::string field = config_error_field(
      [&] { parse_scenario_json(broken, "cfg.json"); });
  CHECK(field == "");
  try {
    parse_scenario_json(broken, "cfg.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("cfg.json:2: JSON parse error:") != std::string::npos);
  }
}

TEST_CASE("null turn penalty selects the geometry default") {
  const Scenario s = parse_scenario_json(
      R"({"geometry": {"width_cells": 64, "height_cells": 64},
          "turn_penalty_weight": null})");
  CHECK(s.turn_penalty_weight == -1.0);
  CHECK(s.resolved_turn_penalty() == doctest::Approx(1.0 / 256.0));

  const Scenario explicit_weight =
      parse_scenario_json(R"({"turn_penalty_weight": 0.25})");
  CHECK(explicit_weight.turn_penalty_weight == 0.25);
  CHECK(explicit_weight.resolved_turn_penalty() == 0.25);
}

TEST_CASE("serialization is canonical and round-trips") {
  // Scrambled key order and stray whitespace must not affect the canonical
  // form.
  const std::string text = R"({
    "seed": 42,
    "geometry": {"height_cells": 16, "width_cells": 12},
    "router": "bfs",
    "no_fly_zones": [{"rect": [3, 3, 4, 4]}]
  })";
  const Scenario first = parse_scenario_json(text);
  const std::string canonical = serialize_scenario(first);

  const Scenario reparsed = parse_scenario_json(canonical);
  CHECK(serialize_scenario(reparsed) == canonical);
  CHECK(config_hash(reparsed) == config_hash(first));

  CHECK(canonical.find('\n') == std::string::npos);
  CHECK(canonical.find("\"width_cells\":12") != std::string::npos);
  CHECK(canonical.find("\"router\":\"bfs\"") != std::string::npos);

  Scenario changed = first;
  changed.seed += 1;
  CHECK(config_hash(changed) != config_hash(first));
}

TEST_CASE("metric formatting keeps six significant digits") {
  CHECK(format_metric(0.0) == "0");
  CHECK(format_metric(14.0) == "14");
  CHECK(format_metric(0.5) == "0.5");
  CHECK(format_metric(-2.25) == "-2.25");
  CHECK(format_metric(1.0 / 3.0) == "0.333333");
  CHECK(format_metric(123456789.0) == "1.23457e+08");
}

TEST_CASE("artifacts land on disk with stable shapes") {
  const fs::path dir = fresh_dir("artifacts");
  const Scenario s = parse_scenario_json(kMicroScenario);
  const RunOutput out = run_scenario(s);
  emit_artifacts(out, s, dir.string());

  const auto metrics = lines_of(read_file(dir / "metrics.csv"));
  REQUIRE(metrics.size() == 1 + 2 + 1);
  CHECK(metrics[0] ==
        "replication,seed,requests,launched,completed,rejected,"
        "avg_flight_time_s,conflict_ratio,no_link_rate,avg_in_flight,"
        "avg_turns,energy_per_s_small,energy_per_s_medium,"
        "energy_per_s_large,mean_route_pops,peak_live_entries,"
        "peak_dense_window_cells,sparsity_violations");
  CHECK(metrics[1].rfind("0,5,", 0) == 0);
  CHECK(metrics[2].rfind("1,6,", 0) == 0);
  CHECK(metrics[3].rfind("mean,", 0) == 0);
  const std::string mean_requests =
      "mean," + std::to_string(out.aggregate.seed) + "," +
      format_metric(out.aggregate.requests) + ",";
  CHECK(metrics[3].rfind(mean_requests, 0) == 0);

  const auto density = lines_of(read_file(dir / "density.csv"));
  REQUIRE(density.size() == 6);
  for (const std::string& row : density)
    CHECK(std::count(row.begin(), row.end(), ',') == 5);

  const auto routes = lines_of(read_file(dir / "routes.csv"));
  CHECK(routes[0] ==
        "replication,mission_id,request_step,status,launch_step,"
        "arrival_step,flight_s,turns,route_pops,path_cells,"
        "conflict_steps,no_link_steps");
  std::size_t mission_total = 0;
  for (const MetricsReport& rep : out.replications)
    mission_total += rep.missions.size();
  CHECK(routes.size() == 1 + mission_total);
  int completed_rows = 0;
  int censored_rows = 0;
  for (std::size_t i = 1; i < routes.size(); ++i) {
    if (routes[i].find(",completed,") != std::string::npos) {
      ++completed_rows;
      CHECK(routes[i].find(",-1,") == std::string::npos);
    } else {
      ++censored_rows;
      CHECK(routes[i].find(",-1,") != std::string::npos);
    }
  }
  CHECK(completed_rows > 0);
  CHECK(censored_rows > 0);

  REQUIRE(out.aggregate.coverage.size() == 2);
  for (const auto& [t, grid] : out.aggregate.coverage) {
    const auto channel_rows =
        lines_of(read_file(dir / ("channels_t" + std::to_string(t) + ".csv")));
    CHECK(channel_rows.size() == 6);
  }
  CHECK(fs::exists(dir / "channels_t2.csv"));
  CHECK(fs::exists(dir / "channels_t10.csv"));

  const auto manifest = lines_of(read_file(dir / "manifest.txt"));
  REQUIRE(manifest.size() == 5);
  CHECK(manifest[0] == "version=0.1.0");
  char hash_hex[17];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(config_hash(s)));
  CHECK(manifest[1] == std::string("config_hash=") + hash_hex);
  CHECK(manifest[2] == "seed=5");
  CHECK(manifest[3] == "replications=2");
  CHECK(manifest[4] == "scenario=" + serialize_scenario(s));

  // A second run of the same scenario emits byte-identical artifacts.
  const fs::path again = fresh_dir("artifacts_again");
  emit_artifacts(run_scenario(s), s, again.string());
  for (const char* name :
       {"metrics.csv", "density.csv", "routes.csv", "manifest.txt",
        "channels_t2.csv", "channels_t10.csv"})
    CHECK(read_file(again / name) == read_file(dir / name));
}

TEST_CASE("command line drives validate, run, route and compare") {
  const fs::path dir = fresh_dir("cli");
  const fs::path good = write_config(dir, "good.json", kMicroScenario);
  const fs::path bad =
      write_config(dir, "bad.json", R"({"bogus": 1})");
  const fs::path walled = write_config(dir, "walled.json", R"({
    "geometry": {"width_cells": 8, "height_cells": 8},
    "no_fly_zones": [{"rect": [4, 0, 4, 7]}]
  })");

  SUBCASE("validate prints the config hash") {
    CoutCapture capture;
    CHECK(run_cli({"validate", good.string().c_str()}) == 0);
    const std::string line = capture.str();
    REQUIRE(line.rfind("ok config_hash=", 0) == 0);
    CHECK(line.size() == std::string("ok config_hash=").size() + 16 + 1);
  }

  SUBCASE("validate rejects malformed configs") {
    CHECK(run_cli({"validate", bad.string().c_str()}) == 1);
  }

  SUBCASE("missing files are a runtime failure") {
    CHECK(run_cli({"validate", (dir / "absent.json").string().c_str()}) == 2);
  }

  SUBCASE("run honors overrides and writes artifacts") {
    const fs::path out = dir / "run_out";
    CoutCapture capture;
    CHECK(run_cli({"run", good.string().c_str(), "--out",
                   out.string().c_str(), "--replications", "1", "--seed", "7",
                   "--router", "bfs"}) == 0);
    const auto metrics = lines_of(read_file(out / "metrics.csv"));
    REQUIRE(metrics.size() == 1 + 1 + 1);
    CHECK(metrics[1].rfind("0,7,", 0) == 0);
    CHECK(fs::exists(out / "routes.csv"));
    CHECK(fs::exists(out / "manifest.txt"));
    CHECK(capture.str().find("artifacts=" + out.string()) !=
          std::string::npos);
  }

  SUBCASE("run rejects unknown routers") {
    CHECK(run_cli({"run", good.string().c_str(), "--router", "astar"}) == 1);
  }

  SUBCASE("route prints the trajectory and summary") {
    CoutCapture capture;
    CHECK(run_cli({"route", walled.string().c_str(), "--from", "0,0", "--to",
                   "3,0"}) == 0);
    const auto lines = lines_of(capture.str());
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "0 0 0");
    CHECK(lines[3] == "3 3 0");
    CHECK(lines[4].rfind("arrival=3 turns=0 expanded=", 0) == 0);
  }

  SUBCASE("route reports unreachable destinations") {
    CoutCapture capture;
    CHECK(run_cli({"route", walled.string().c_str(), "--from", "0,0", "--to",
                   "6,0"}) == 2);
    CHECK(capture.str().rfind("no route (expanded=", 0) == 0);
  }

  SUBCASE("route rejects blocked destinations as input errors") {
    CHECK(run_cli({"route", walled.string().c_str(), "--from", "0,0", "--to",
                   "4,0", "--router", "bfs"}) == 1);
  }

  SUBCASE("route rejects malformed coordinates") {
    CHECK(run_cli({"route", walled.string().c_str(), "--from", "zero",
                   "--to", "3,0"}) == 1);
  }

  SUBCASE("unknown subcommands fail") {
    CHECK(run_cli({"frobnicate"}) == 1);
  }

  SUBCASE("compare sweeps routers and writes the summary table") {
    const fs::path out = dir / "compare_out";
    CHECK(run_cli({"compare", good.string().c_str(), "--out",
                   out.string().c_str(), "--intervals", "4"}) == 0);
    const auto summary = lines_of(read_file(out / "compare_summary.csv"));
    REQUIRE(summary.size() == 1 + 4);
    CHECK(summary[0] ==
          "router,generation_interval_s,requests,launched,completed,"
          "avg_flight_time_s,conflict_ratio,no_link_rate,avg_turns,"
          "energy_per_s_small,energy_per_s_medium,energy_per_s_large,"
          "mean_route_pops");
    CHECK(summary[1].rfind("none,4,", 0) == 0);
    CHECK(summary[2].rfind("bfs,4,", 0) == 0);
    CHECK(summary[3].rfind("srts,4,", 0) == 0);
    CHECK(summary[4].rfind("reactive,4,", 0) == 0);
  }
}
