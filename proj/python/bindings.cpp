#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "srts/energy.hpp"
#include "srts/router_bfs.hpp"
#include "srts/router_srts.hpp"
#include "srts/scenario_io.hpp"

namespace py = pybind11;
using namespace srts;

namespace {

py::dict report_scalars(const MetricsReport& r) {
  py::dict d;
  d["seed"] = r.seed;
  d["requests"] = r.requests;
  d["launched"] = r.launched;
  d["completed"] = r.completed;
  d["rejected"] = r.rejected;
  d["avg_flight_time_s"] = r.avg_flight_time_s;
  d["conflict_ratio"] = r.conflict_ratio;
  d["no_link_rate"] = r.no_link_rate;
  d["avg_in_flight"] = r.avg_in_flight;
  d["avg_turns"] = r.avg_turns;
  d["energy_per_s_small"] = r.energy_per_s_small;
  d["energy_per_s_medium"] = r.energy_per_s_medium;
  d["energy_per_s_large"] = r.energy_per_s_large;
  d["mean_route_pops"] = r.mean_route_pops;
  d["peak_live_entries"] = r.peak_live_entries;
  d["peak_dense_window_cells"] = r.peak_dense_window_cells;
  d["sparsity_violations"] = r.sparsity_violations;
  return d;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Temporal-spatial airspace routing core";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<GridGeometry>(m, "GridGeometry")
      .def(py::init([](int width, int height, double cell_size_m,
                       double cruise_speed_mps) {
             return GridGeometry::make(width, height, cell_size_m,
                                       cruise_speed_mps);
           }),
           py::arg("width_cells"), py::arg("height_cells"),
           py::arg("cell_size_m") = 18.0, py::arg("cruise_speed_mps") = 18.0)
      .def_readonly("width_cells", &GridGeometry::width_cells)
      .def_readonly("height_cells", &GridGeometry::height_cells)
      .def_readonly("cell_size_m", &GridGeometry::cell_size_m)
      .def_readonly("step_seconds", &GridGeometry::step_seconds)
      .def_readonly("cruise_speed_mps", &GridGeometry::cruise_speed_mps)
      .def("cell_center_m",
           [](const GridGeometry& g, int x, int y) {
             const Vec2 c = g.cell_center_m(x, y);
             return std::pair(c.x, c.y);
           })
      .def("__repr__", [](const GridGeometry& g) {
        std::ostringstream out;
        out << "GridGeometry(" << g.width_cells << ", " << g.height_cells
            << ", cell_size_m=" << g.cell_size_m << ")";
        return out.str();
      });

  py::class_<TSCell>(m, "TSCell")
      .def(py::init([](int x, int y, TimeStep t) {
             return TSCell{x, y, t};
           }),
           py::arg("x"), py::arg("y"), py::arg("t") = 0)
      .def_readwrite("x", &TSCell::x)
      .def_readwrite("y", &TSCell::y)
      .def_readwrite("t", &TSCell::t)
      .def(py::self == py::self)
      .def(py::self != py::self)
      .def("__repr__", [](const TSCell& c) {
        std::ostringstream out;
        out << "TSCell(" << c.x << ", " << c.y << ", t=" << c.t << ")";
        return out.str();
      });

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init([](std::vector<TSCell> cells) {
             Trajectory t;
             t.cells = std::move(cells);
             return t;
           }),
           py::arg("cells"))
      .def_readonly("cells", &Trajectory::cells)
      .def_property_readonly("arrival_time", &Trajectory::arrival_time)
      .def_property_readonly("steps", &Trajectory::steps)
      .def("turns", [](const Trajectory& t) { return count_turns(t); })
      .def("length_m", [](const Trajectory& t, const GridGeometry& g) {
        return path_length_m(t, g);
      });

  py::class_<AirspaceEnv>(m, "AirspaceEnv")
      .def(py::init<const GridGeometry&>(), py::arg("geometry"))
      .def_property_readonly("geometry", &AirspaceEnv::geometry)
      .def("set_static_blocked", &AirspaceEnv::set_static_blocked,
           py::arg("x"), py::arg("y"), py::arg("blocked") = true)
      .def("static_blocked", &AirspaceEnv::static_blocked, py::arg("x"),
           py::arg("y"))
      .def("add_no_fly_rect", &AirspaceEnv::add_no_fly_rect, py::arg("x0"),
           py::arg("y0"), py::arg("x1"), py::arg("y1"))
      .def("occupancy", &AirspaceEnv::occupancy, py::arg("cell"))
      .def("occupancy",
           [](const AirspaceEnv& env, int x, int y, TimeStep t) {
             return env.occupancy(TSCell{x, y, t});
           })
      .def("reserve", &AirspaceEnv::reserve_trajectory, py::arg("trajectory"))
      .def("instant_refresh", &AirspaceEnv::instant_refresh, py::arg("now"))
      .def("live_entry_count", &AirspaceEnv::live_entry_count)
      .def("current_time", &AirspaceEnv::current_time)
      .def("horizon", &AirspaceEnv::horizon);

  py::class_<RouteResult>(m, "RouteResult")
      .def_readonly("trajectory", &RouteResult::trajectory)
      .def_readonly("expanded_nodes", &RouteResult::expanded_nodes)
      .def("__bool__",
           [](const RouteResult& r) { return r.trajectory.has_value(); });

  m.def("route_bfs", &route_bfs, py::arg("env"), py::arg("source"),
        py::arg("dest_xy"), py::arg("deadline"),
        "Flood/traceback baseline router; reserves the returned trajectory.");

  m.def(
      "route_srts",
      [](AirspaceEnv& env, const TSCell& source, std::pair<int, int> dest_xy,
         double turn_penalty_weight, bool allow_wait, int manhattan_factor,
         int slack_steps) {
        RoutingConfig cfg;
        cfg.turn_penalty_weight =
            turn_penalty_weight < 0.0 ? default_turn_penalty(env.geometry())
                                      : turn_penalty_weight;
        cfg.allow_wait = allow_wait;
        cfg.deadline = DeadlinePolicy{manhattan_factor, slack_steps};
        return route_srts(env, nullptr, source, dest_xy, cfg);
      },
      py::arg("env"), py::arg("source"), py::arg("dest_xy"),
      py::arg("turn_penalty_weight") = -1.0, py::arg("allow_wait") = true,
      py::arg("manhattan_factor") = 4, py::arg("slack_steps") = 64,
      "Sparse temporal-spatial A* router; negative turn_penalty_weight "
      "selects the geometry default. Reserves the returned trajectory.");

  m.def("default_turn_penalty", &default_turn_penalty, py::arg("geometry"));
  m.def("count_turns", &count_turns, py::arg("trajectory"));

  m.def(
      "path_loss_db",
      [](double d_m, double exponent, double ref_distance_m,
         double ref_loss_db) {
        PathLossParams params;
        params.ref_distance_m = ref_distance_m;
        params.ref_loss_db = ref_loss_db;
        return path_loss(d_m, exponent, params).db;
      },
      py::arg("d_m"), py::arg("exponent"), py::arg("ref_distance_m") = 1.0,
      py::arg("ref_loss_db") = 38.0,
      "Log-distance path loss in dB, clamped to the reference below "
      "ref_distance_m.");

  m.def(
      "calibrate_beta_alpha",
      [](double equivalent_m, double cruise_mps, double turn_radius_m,
         double step_seconds) {
        return calibrate_beta_alpha(equivalent_m, cruise_mps,
                                    TurnKinematics{turn_radius_m},
                                    step_seconds);
      },
      py::arg("equivalent_m"), py::arg("cruise_mps") = 18.0,
      py::arg("turn_radius_m") = 45.0, py::arg("step_seconds") = 1.0,
      "beta/alpha making one standard turn cost the same as the given "
      "straight distance.");

  m.def(
      "canonical_config",
      [](const std::string& config_json) {
        return serialize_scenario(parse_scenario_json(config_json));
      },
      py::arg("config_json"),
      "Validates a scenario config and returns its canonical form. Raises "
      "ConfigError (a ValueError) on any problem.");

  m.def(
      "run_scenario",
      [](const std::string& config_json) {
        const Scenario s = parse_scenario_json(config_json);
        const RunOutput out = run_scenario(s);
        py::dict result;
        result["config_hash"] = hash_hex(config_hash(s));
        py::dict aggregate = report_scalars(out.aggregate);
        aggregate["density"] = out.aggregate.density;
        py::dict coverage;
        for (const auto& [t, grid] : out.aggregate.coverage)
          coverage[py::int_(t)] = grid;
        aggregate["coverage"] = coverage;
        result["aggregate"] = aggregate;
        py::list replications;
        for (const MetricsReport& rep : out.replications)
          replications.append(report_scalars(rep));
        result["replications"] = replications;
        return result;
      },
      py::arg("config_json"),
      "Parses a scenario config, runs every replication and returns the "
      "metrics as nested dicts.");
}
