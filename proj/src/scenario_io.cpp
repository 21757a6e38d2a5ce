#include "srts/scenario_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "srts/router_bfs.hpp"

namespace srts {

namespace {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

[[noreturn]] void bad_field(const std::string& path, const std::string& why) {
  throw ConfigError(path, why);
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end())
      bad_field(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double get_number(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) bad_field(path + key, "must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) bad_field(path + key, "must be an integer");
  return v.get<int>();
}

std::uint64_t get_uint64(const json& obj, const std::string& path,
                         const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() ||
      (v.is_number_integer() && v.get<std::int64_t>() < 0 &&
       !v.is_number_unsigned()))
    bad_field(path + key, "must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) bad_field(path + key, "must be a boolean");
  return v.get<bool>();
}

RectArea parse_rect(const json& v, const std::string& path,
                    bool wants_probability) {
  if (!v.is_object()) bad_field(path, "must be an object");
  if (wants_probability)
    require_keys(v, path, {"rect", "probability"});
  else
    require_keys(v, path, {"rect"});
  if (!v.contains("rect")) bad_field(path + ".rect", "is required");
  const json& r = v.at("rect");
  if (!r.is_array() || r.size() != 4) bad_field(path + ".rect", "must be [x0, y0, x1, y1]");
  for (const json& e : r)
    if (!e.is_number_integer()) bad_field(path + ".rect", "must hold integers");
  RectArea area;
  area.x0 = r[0].get<int>();
  area.y0 = r[1].get<int>();
  area.x1 = r[2].get<int>();
  area.y1 = r[3].get<int>();
  if (wants_probability)
    area.launch_probability = get_number(v, path + ".", "probability", 0.0);
  return area;
}

// Defaults used when the config omits the corresponding sections: four
// launch corners (probabilities 0.9/0.8/0.7/0.6), four landing areas at the
// edge midpoints, ten stations on a 5 x 2 lattice with eight channels each.
std::vector<RectArea> default_launch_areas(const GridGeometry& g) {
  const int margin = std::max(1, g.width_cells / 16);
  const int size = std::max(1, g.width_cells / 8);
  const int lo = margin;
  const int hi_x = std::max(margin, g.width_cells - margin - size);
  const int hi_y = std::max(margin, g.height_cells - margin - size);
  auto rect = [&](int x, int y, double p) {
    RectArea r{x, y, std::min(x + size - 1, g.width_cells - 1),
               std::min(y + size - 1, g.height_cells - 1), p};
    return r;
  };
  return {rect(lo, lo, 0.9), rect(hi_x, lo, 0.8), rect(lo, hi_y, 0.7),
          rect(hi_x, hi_y, 0.6)};
}

std::vector<RectArea> default_landing_areas(const GridGeometry& g) {
  const int size = std::max(1, g.width_cells / 8);
  const int margin = std::max(1, g.width_cells / 16);
  const int mid_x = std::max(0, g.width_cells / 2 - size / 2);
  const int mid_y = std::max(0, g.height_cells / 2 - size / 2);
  auto rect = [&](int x, int y) {
    RectArea r{x, y, std::min(x + size - 1, g.width_cells - 1),
               std::min(y + size - 1, g.height_cells - 1), 0.0};
    return r;
  };
  return {rect(mid_x, margin), rect(mid_x, g.height_cells - margin - size),
          rect(margin, mid_y), rect(g.width_cells - margin - size, mid_y)};
}

std::vector<BaseStation> default_stations(const GridGeometry& g) {
  std::vector<BaseStation> stations;
  const double w_m = g.width_cells * g.cell_size_m;
  const double h_m = g.height_cells * g.cell_size_m;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 5; ++i)
      stations.push_back(
          {{(i + 0.5) * w_m / 5.0, (j + 0.5) * h_m / 2.0}, 8});
  return stations;
}

Scenario parse_scenario(const json& root) {
  if (!root.is_object())
    throw ConfigError("", "scenario config must be a JSON object");
  require_keys(root, "",
               {"geometry", "launch_areas", "landing_areas", "no_fly_zones",
                "stations", "path_loss", "generation_interval_s",
                "sim_length_steps", "separation_m", "router",
                "connectivity_check", "turn_penalty_weight", "allow_wait",
                "deadline", "reactive", "thrust", "seed", "replications",
                "retry_rejected", "burn_in_steps", "snapshot_steps",
                "snapshot_fractions", "out_dir"});

  Scenario s;
  if (root.contains("geometry")) {
    const json& g = root.at("geometry");
    if (!g.is_object()) bad_field("geometry", "must be an object");
    require_keys(g, "geometry",
                 {"width_cells", "height_cells", "cell_size_m",
                  "cruise_speed_mps"});
    const int w = get_int(g, "geometry.", "width_cells", 528);
    const int h = get_int(g, "geometry.", "height_cells", 528);
    const double cell = get_number(g, "geometry.", "cell_size_m", 18.0);
    const double cruise = get_number(g, "geometry.", "cruise_speed_mps", 18.0);
    try {
      s.geometry = GridGeometry::make(w, h, cell, cruise);
    } catch (const InputError& e) {
      throw ConfigError("geometry", e.what());
    }
  }

  auto parse_rects = [&](const char* key, bool probability) {
    std::vector<RectArea> rects;
    const json& arr = root.at(key);
    if (!arr.is_array()) bad_field(key, "must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
      rects.push_back(parse_rect(arr[i],
                                 std::string(key) + "[" + std::to_string(i) +
                                     "]",
                                 probability));
    return rects;
  };
  s.launch_areas = root.contains("launch_areas")
                       ? parse_rects("launch_areas", true)
                       : default_launch_areas(s.geometry);
  s.landing_areas = root.contains("landing_areas")
                        ? parse_rects("landing_areas", false)
                        : default_landing_areas(s.geometry);
  if (root.contains("no_fly_zones"))
    s.no_fly_zones = parse_rects("no_fly_zones", false);

  if (root.contains("stations")) {
    const json& arr = root.at("stations");
    if (!arr.is_array()) bad_field("stations", "must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "stations[" + std::to_string(i) + "]";
      const json& v = arr[i];
      if (!v.is_object()) bad_field(path, "must be an object");
      require_keys(v, path, {"x_m", "y_m", "channels"});
      BaseStation st;
      st.position_m = {get_number(v, path + ".", "x_m", 0.0),
                       get_number(v, path + ".", "y_m", 0.0)};
      st.channel_count = get_int(v, path + ".", "channels", 8);
      s.stations.push_back(st);
    }
  } else {
    s.stations = default_stations(s.geometry);
  }

  if (root.contains("path_loss")) {
    const json& p = root.at("path_loss");
    if (!p.is_object()) bad_field("path_loss", "must be an object");
    require_keys(p, "path_loss",
                 {"ref_distance_m", "ref_loss_db", "exponent_los",
                  "exponent_nlos", "los_probability", "shadowing_db",
                  "loss_threshold_db"});
    PathLossParams& pl = s.path_loss;
    pl.ref_distance_m = get_number(p, "path_loss.", "ref_distance_m", 1.0);
    pl.ref_loss_db = get_number(p, "path_loss.", "ref_loss_db", 38.0);
    pl.exponent_los = get_number(p, "path_loss.", "exponent_los", 3.0);
    pl.exponent_nlos = get_number(p, "path_loss.", "exponent_nlos", 3.5);
    pl.los_probability = get_number(p, "path_loss.", "los_probability", 0.9);
    pl.shadowing_db = get_number(p, "path_loss.", "shadowing_db", 0.0);
    pl.loss_threshold_db =
        get_number(p, "path_loss.", "loss_threshold_db", 140.0);
  }

  s.generation_interval_s =
      get_number(root, "", "generation_interval_s", 10.0);
  s.sim_length_steps = get_int(root, "", "sim_length_steps", 20000);
  s.separation_m = get_number(root, "", "separation_m", 18.0);
  if (root.contains("router")) {
    const json& r = root.at("router");
    if (!r.is_string()) bad_field("router", "must be a string");
    s.router = router_kind_from_name(r.get<std::string>());
  }
  s.connectivity_check = get_bool(root, "", "connectivity_check", false);
  if (root.contains("turn_penalty_weight") &&
      root.at("turn_penalty_weight").is_null()) {
    s.turn_penalty_weight = -1.0;
  } else {
    s.turn_penalty_weight =
        get_number(root, "", "turn_penalty_weight", -1.0);
  }
  s.allow_wait = get_bool(root, "", "allow_wait", true);

  if (root.contains("deadline")) {
    const json& d = root.at("deadline");
    if (!d.is_object()) bad_field("deadline", "must be an object");
    require_keys(d, "deadline", {"manhattan_factor", "slack_steps"});
    s.deadline.manhattan_factor = get_int(d, "deadline.", "manhattan_factor", 4);
    s.deadline.slack_steps = get_int(d, "deadline.", "slack_steps", 64);
    if (s.deadline.manhattan_factor < 1)
      bad_field("deadline.manhattan_factor", "must be at least 1");
    if (s.deadline.slack_steps < 0)
      bad_field("deadline.slack_steps", "must be non-negative");
  }

  if (root.contains("reactive")) {
    const json& r = root.at("reactive");
    if (!r.is_object()) bad_field("reactive", "must be an object");
    require_keys(r, "reactive",
                 {"attract_gain", "repulse_gain", "sensing_radius_m",
                  "clockwise_bias", "min_distance_m"});
    PotentialFieldConfig& rf = s.reactive;
    rf.attract_gain = get_number(r, "reactive.", "attract_gain", 1.0);
    rf.repulse_gain = get_number(r, "reactive.", "repulse_gain", 200.0);
    rf.sensing_radius_m =
        get_number(r, "reactive.", "sensing_radius_m", 54.0);
    rf.clockwise_bias = get_number(r, "reactive.", "clockwise_bias", 0.1);
    rf.min_distance_m = get_number(r, "reactive.", "min_distance_m", 0.5);
  }
  s.reactive.max_speed_mps = s.geometry.cruise_speed_mps;

  if (root.contains("thrust")) {
    const json& t = root.at("thrust");
    if (!t.is_object()) bad_field("thrust", "must be an object");
    require_keys(t, "thrust",
                 {"small_equivalent_m", "medium_equivalent_m",
                  "large_equivalent_m", "turn_radius_m",
                  "include_launch_transients"});
    s.thrust.small_equivalent_m =
        get_number(t, "thrust.", "small_equivalent_m", 90.0);
    s.thrust.medium_equivalent_m =
        get_number(t, "thrust.", "medium_equivalent_m", 180.0);
    s.thrust.large_equivalent_m =
        get_number(t, "thrust.", "large_equivalent_m", 270.0);
    s.thrust.turn.radius_m = get_number(t, "thrust.", "turn_radius_m", 45.0);
    s.thrust.include_launch_transients =
        get_bool(t, "thrust.", "include_launch_transients", false);
  }

  s.seed = get_uint64(root, "", "seed", 1);
  s.replications = get_int(root, "", "replications", 10);
  s.retry_rejected = get_bool(root, "", "retry_rejected", false);
  s.burn_in_steps = get_int(root, "", "burn_in_steps", 0);

  if (root.contains("snapshot_steps")) {
    const json& arr = root.at("snapshot_steps");
    if (!arr.is_array()) bad_field("snapshot_steps", "must be an array");
    for (const json& v : arr) {
      if (!v.is_number_integer())
        bad_field("snapshot_steps", "must hold integers");
      s.snapshot_steps.push_back(v.get<TimeStep>());
    }
  }
  if (root.contains("snapshot_fractions")) {
    const json& arr = root.at("snapshot_fractions");
    if (!arr.is_array()) bad_field("snapshot_fractions", "must be an array");
    s.snapshot_fractions.clear();
    for (const json& v : arr) {
      if (!v.is_number()) bad_field("snapshot_fractions", "must hold numbers");
      s.snapshot_fractions.push_back(v.get<double>());
    }
  }
  if (root.contains("out_dir")) {
    const json& v = root.at("out_dir");
    if (!v.is_string()) bad_field("out_dir", "must be a string");
    s.out_dir = v.get<std::string>();
  }

  validate_scenario(s);
  return s;
}

}  // namespace

Scenario parse_scenario_json(const std::string& text,
                             const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Count newlines up to the failing byte for a line-accurate message.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const long line =
        1 + std::count(text.begin(), text.begin() + upto, '\n');
    throw ConfigError("", origin + ":" + std::to_string(line) +
                              ": JSON parse error: " + e.what());
  }
  return parse_scenario(root);
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str(), path);
}

std::string serialize_scenario(const Scenario& s) {
  json root;
  root["geometry"] = {{"width_cells", s.geometry.width_cells},
                      {"height_cells", s.geometry.height_cells},
                      {"cell_size_m", s.geometry.cell_size_m},
                      {"cruise_speed_mps", s.geometry.cruise_speed_mps}};
  auto rects = [](const std::vector<RectArea>& areas, bool probability) {
    json arr = json::array();
    for (const RectArea& a : areas) {
      json o;
      o["rect"] = {a.x0, a.y0, a.x1, a.y1};
      if (probability) o["probability"] = a.launch_probability;
      arr.push_back(o);
    }
    return arr;
  };
  root["launch_areas"] = rects(s.launch_areas, true);
  root["landing_areas"] = rects(s.landing_areas, false);
  root["no_fly_zones"] = rects(s.no_fly_zones, false);
  json stations = json::array();
  for (const BaseStation& st : s.stations)
    stations.push_back({{"x_m", st.position_m.x},
                        {"y_m", st.position_m.y},
                        {"channels", st.channel_count}});
  root["stations"] = stations;
  root["path_loss"] = {{"ref_distance_m", s.path_loss.ref_distance_m},
                       {"ref_loss_db", s.path_loss.ref_loss_db},
                       {"exponent_los", s.path_loss.exponent_los},
                       {"exponent_nlos", s.path_loss.exponent_nlos},
                       {"los_probability", s.path_loss.los_probability},
                       {"shadowing_db", s.path_loss.shadowing_db},
                       {"loss_threshold_db", s.path_loss.loss_threshold_db}};
  root["generation_interval_s"] = s.generation_interval_s;
  root["sim_length_steps"] = s.sim_length_steps;
  root["separation_m"] = s.separation_m;
  root["router"] = router_kind_name(s.router);
  root["connectivity_check"] = s.connectivity_check;
  root["turn_penalty_weight"] = s.turn_penalty_weight;
  root["allow_wait"] = s.allow_wait;
  root["deadline"] = {{"manhattan_factor", s.deadline.manhattan_factor},
                      {"slack_steps", s.deadline.slack_steps}};
  root["reactive"] = {{"attract_gain", s.reactive.attract_gain},
                      {"repulse_gain", s.reactive.repulse_gain},
                      {"sensing_radius_m", s.reactive.sensing_radius_m},
                      {"clockwise_bias", s.reactive.clockwise_bias},
                      {"min_distance_m", s.reactive.min_distance_m}};
  root["thrust"] = {
      {"small_equivalent_m", s.thrust.small_equivalent_m},
      {"medium_equivalent_m", s.thrust.medium_equivalent_m},
      {"large_equivalent_m", s.thrust.large_equivalent_m},
      {"turn_radius_m", s.thrust.turn.radius_m},
      {"include_launch_transients", s.thrust.include_launch_transients}};
  root["seed"] = s.seed;
  root["replications"] = s.replications;
  root["retry_rejected"] = s.retry_rejected;
  root["burn_in_steps"] = s.burn_in_steps;
  root["snapshot_steps"] = s.snapshot_steps;
  root["snapshot_fractions"] = s.snapshot_fractions;
  root["out_dir"] = s.out_dir;
  return root.dump();
}

std::uint64_t config_hash(const Scenario& s) {
  return fnv1a64(serialize_scenario(s));
}

std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << body;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string metrics_row(const std::string& label, const MetricsReport& r) {
  std::ostringstream row;
  row << label << ',' << r.seed << ',' << format_metric(r.requests) << ','
      << format_metric(r.launched) << ',' << format_metric(r.completed) << ','
      << format_metric(r.rejected) << ','
      << format_metric(r.avg_flight_time_s) << ','
      << format_metric(r.conflict_ratio) << ','
      << format_metric(r.no_link_rate) << ','
      << format_metric(r.avg_in_flight) << ',' << format_metric(r.avg_turns)
      << ',' << format_metric(r.energy_per_s_small) << ','
      << format_metric(r.energy_per_s_medium) << ','
      << format_metric(r.energy_per_s_large) << ','
      << format_metric(r.mean_route_pops) << ','
      << format_metric(r.peak_live_entries) << ','
      << format_metric(r.peak_dense_window_cells) << ','
      << format_metric(r.sparsity_violations) << '\n';
  return row.str();
}

std::string grid_csv(const std::vector<int>& grid, int width) {
  std::ostringstream out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << grid[i];
    out << (((i + 1) % width == 0) ? '\n' : ',');
  }
  return out.str();
}

}  // namespace

void emit_artifacts(const RunOutput& out, const Scenario& s,
                    const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir);

  std::ostringstream metrics;
  metrics << "replication,seed,requests,launched,completed,rejected,"
             "avg_flight_time_s,conflict_ratio,no_link_rate,avg_in_flight,"
             "avg_turns,energy_per_s_small,energy_per_s_medium,"
             "energy_per_s_large,mean_route_pops,peak_live_entries,"
             "peak_dense_window_cells,sparsity_violations\n";
  for (std::size_t i = 0; i < out.replications.size(); ++i)
    metrics << metrics_row(std::to_string(i), out.replications[i]);
  metrics << metrics_row("mean", out.aggregate);
  write_file(fs::path(out_dir) / "metrics.csv", metrics.str());

  write_file(fs::path(out_dir) / "density.csv",
             grid_csv(out.aggregate.density, s.geometry.width_cells));

  std::ostringstream routes;
  routes << "replication,mission_id,request_step,status,launch_step,"
            "arrival_step,flight_s,turns,route_pops,path_cells,"
            "conflict_steps,no_link_steps\n";
  for (std::size_t rep = 0; rep < out.replications.size(); ++rep) {
    for (const Mission& m : out.replications[rep].missions) {
      const double flight_s =
          m.status == MissionStatus::Completed
              ? (m.arrival_time - m.launch_time) * s.geometry.step_seconds
              : -1.0;
      const std::size_t cells =
          m.trajectory ? m.trajectory->cells.size() : m.track.size();
      routes << rep << ',' << m.id << ',' << m.request_time << ','
             << mission_status_name(m.status) << ',' << m.launch_time << ','
             << m.arrival_time << ',' << format_metric(flight_s) << ','
             << m.turns << ',' << m.route_pops << ',' << cells << ','
             << m.conflict_steps.size() << ',' << m.no_link_steps << '\n';
    }
  }
  write_file(fs::path(out_dir) / "routes.csv", routes.str());

  for (const auto& [t, grid] : out.aggregate.coverage)
    write_file(fs::path(out_dir) /
                   ("channels_t" + std::to_string(t) + ".csv"),
               grid_csv(grid, s.geometry.width_cells));

  std::ostringstream manifest;
  char hash_hex[17];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(config_hash(s)));
  manifest << "version=0.1.0\n"
           << "config_hash=" << hash_hex << '\n'
           << "seed=" << s.seed << '\n'
           << "replications=" << s.replications << '\n'
           << "scenario=" << serialize_scenario(s) << '\n';
  write_file(fs::path(out_dir) / "manifest.txt", manifest.str());
}

namespace {

std::pair<int, int> parse_xy(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw ConfigError(flag, "expected X,Y");
  try {
    return {std::stoi(text.substr(0, comma)),
            std::stoi(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError(flag, "expected integer X,Y");
  }
}

void print_run_summary(std::ostream& os, const RunOutput& out) {
  const MetricsReport& a = out.aggregate;
  os << "replications=" << out.replications.size()
     << " requests=" << format_metric(a.requests)
     << " launched=" << format_metric(a.launched)
     << " completed=" << format_metric(a.completed) << '\n'
     << "avg_flight_time_s=" << format_metric(a.avg_flight_time_s)
     << " conflict_ratio=" << format_metric(a.conflict_ratio)
     << " no_link_rate=" << format_metric(a.no_link_rate)
     << " avg_turns=" << format_metric(a.avg_turns) << '\n'
     << "mean_route_pops=" << format_metric(a.mean_route_pops)
     << " peak_live_entries=" << format_metric(a.peak_live_entries)
     << " sparsity_violations=" << format_metric(a.sparsity_violations)
     << '\n';
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            std::int64_t seed_override, int replications_override,
            const std::string& router_override) {
  Scenario s = parse_scenario_file(config_path);
  if (seed_override >= 0) s.seed = static_cast<std::uint64_t>(seed_override);
  if (replications_override > 0) s.replications = replications_override;
  if (!router_override.empty())
    s.router = router_kind_from_name(router_override);
  if (!out_override.empty()) s.out_dir = out_override;
  validate_scenario(s);
  const RunOutput out = run_scenario(s);
  emit_artifacts(out, s, s.out_dir);
  print_run_summary(std::cout, out);
  std::cout << "artifacts=" << s.out_dir << '\n';
  return 0;
}

int cmd_route(const std::string& config_path, const std::string& from,
              const std::string& to, int at,
              const std::string& router_override) {
  Scenario s = parse_scenario_file(config_path);
  if (!router_override.empty())
    s.router = router_kind_from_name(router_override);
  if (s.router != RouterKind::Bfs && s.router != RouterKind::Srts)
    throw ConfigError("router", "route requires the bfs or srts router");
  if (at < 0) throw ConfigError("--at", "start step must be non-negative");

  const auto [sx, sy] = parse_xy(from, "--from");
  const auto [dx, dy] = parse_xy(to, "--to");
  AirspaceEnv env(s.geometry);
  for (const RectArea& z : s.no_fly_zones)
    env.add_no_fly_rect(z.x0, z.y0, z.x1, z.y1);
  const TSCell source{sx, sy, at};

  RouteResult result;
  if (s.router == RouterKind::Bfs) {
    result = route_bfs(env, source, {dx, dy},
                       s.deadline.deadline_for(source, dx, dy));
  } else {
    RoutingConfig cfg;
    cfg.turn_penalty_weight = s.resolved_turn_penalty();
    cfg.connectivity_check = s.connectivity_check;
    cfg.allow_wait = s.allow_wait;
    cfg.deadline = s.deadline;
    CommsModel comms(s.stations, s.path_loss);
    SignalBelief belief(comms, s.geometry,
                        [](TimeStep) { return std::vector<InFlightUas>{}; });
    result = route_srts(env, &belief, source, {dx, dy}, cfg);
  }
  if (!result.trajectory) {
    std::cout << "no route (expanded=" << result.expanded_nodes << ")\n";
    return 2;
  }
  for (const TSCell& c : result.trajectory->cells)
    std::cout << c.t << ' ' << c.x << ' ' << c.y << '\n';
  std::cout << "arrival=" << result.trajectory->cells.back().t
            << " turns=" << count_turns(*result.trajectory)
            << " expanded=" << result.expanded_nodes << '\n';
  return 0;
}

int cmd_compare(const std::string& config_path, const std::string& out_override,
                std::vector<double> intervals) {
  Scenario base = parse_scenario_file(config_path);
  if (!out_override.empty()) base.out_dir = out_override;
  if (intervals.empty()) intervals = {10.0, 20.0, 30.0};

  const RouterKind routers[] = {RouterKind::None, RouterKind::Bfs,
                                RouterKind::Srts, RouterKind::Reactive};
  std::ostringstream csv;
  csv << "router,generation_interval_s,requests,launched,completed,"
         "avg_flight_time_s,conflict_ratio,no_link_rate,avg_turns,"
         "energy_per_s_small,energy_per_s_medium,energy_per_s_large,"
         "mean_route_pops\n";
  std::printf("%-9s %-10s %9s %9s %12s %10s %9s %9s\n", "router", "interval",
              "launched", "completed", "avg_flight_s", "conflicts", "no_link",
              "turns");
  for (double interval : intervals) {
    for (RouterKind router : routers) {
      Scenario s = base;
      s.generation_interval_s = interval;
      s.router = router;
      const RunOutput out = run_scenario(s);
      const MetricsReport& a = out.aggregate;
      csv << router_kind_name(router) << ',' << format_metric(interval) << ','
          << format_metric(a.requests) << ',' << format_metric(a.launched)
          << ',' << format_metric(a.completed) << ','
          << format_metric(a.avg_flight_time_s) << ','
          << format_metric(a.conflict_ratio) << ','
          << format_metric(a.no_link_rate) << ','
          << format_metric(a.avg_turns) << ','
          << format_metric(a.energy_per_s_small) << ','
          << format_metric(a.energy_per_s_medium) << ','
          << format_metric(a.energy_per_s_large) << ','
          << format_metric(a.mean_route_pops) << '\n';
      std::printf("%-9s %-10s %9s %9s %12s %10s %9s %9s\n",
                  router_kind_name(router), format_metric(interval).c_str(),
                  format_metric(a.launched).c_str(),
                  format_metric(a.completed).c_str(),
                  format_metric(a.avg_flight_time_s).c_str(),
                  format_metric(a.conflict_ratio).c_str(),
                  format_metric(a.no_link_rate).c_str(),
                  format_metric(a.avg_turns).c_str());
    }
  }
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(base.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + base.out_dir);
  write_file(fs::path(base.out_dir) / "compare_summary.csv", csv.str());
  std::cout << "artifacts=" << base.out_dir << '\n';
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"temporal-spatial routing simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, router_override, from_xy, to_xy;
  std::int64_t seed_override = -1;
  int replications_override = 0, at_step = 0;
  std::vector<double> intervals;

  CLI::App* validate = app.add_subcommand(
      "validate", "parse and validate a scenario config");
  validate->add_option("config", config_path, "scenario JSON file")
      ->required();

  CLI::App* run = app.add_subcommand(
      "run", "run a scenario and emit artifacts");
  run->add_option("config", config_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", seed_override, "seed override");
  run->add_option("--replications", replications_override,
                  "replication count override");
  run->add_option("--router", router_override,
                  "router override: none|bfs|srts|reactive");

  CLI::App* route = app.add_subcommand(
      "route", "plan a single route on an empty scenario map");
  route->add_option("config", config_path, "scenario JSON file")->required();
  route->add_option("--from", from_xy, "source cell X,Y")->required();
  route->add_option("--to", to_xy, "destination cell X,Y")->required();
  route->add_option("--at", at_step, "start step (default 0)");
  route->add_option("--router", router_override, "router override: bfs|srts");

  CLI::App* compare = app.add_subcommand(
      "compare", "run the router x traffic-level matrix");
  compare->add_option("config", config_path, "scenario JSON file")
      ->required();
  compare->add_option("--out", out_dir, "output directory override");
  compare->add_option("--intervals", intervals,
                      "generation intervals in seconds (default 10 20 30)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) {
      const Scenario s = parse_scenario_file(config_path);
      std::cout << "ok config_hash=";
      char hash_hex[17];
      std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                    static_cast<unsigned long long>(config_hash(s)));
      std::cout << hash_hex << '\n';
      return 0;
    }
    if (run->parsed())
      return cmd_run(config_path, out_dir, seed_override,
                     replications_override, router_override);
    if (route->parsed())
      return cmd_route(config_path, from_xy, to_xy, at_step, router_override);
    if (compare->parsed()) return cmd_compare(config_path, out_dir, intervals);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace srts
