// Agent-based traffic engine: mission generation, launch gating through a
// router, per-step flight execution, channel assignment, conflict detection
// and metrics aggregation over replications.
//
// Step order at time t: refresh the reservation store, advance craft already
// in flight, assign channels, detect conflicts, land arrivals, then (on
// generation boundaries) create and launch new missions. Craft launched at t
// enter the active set at t + 1, so every per-step statistic (density,
// in-flight count, conflicts, links) is measured over the same set.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>

#include "srts/airspace.hpp"
#include "srts/comms.hpp"
#include "srts/energy.hpp"
#include "srts/reactive.hpp"
#include "srts/router_srts.hpp"

namespace srts {

enum class RouterKind { None, Bfs, Srts, Reactive };

const char* router_kind_name(RouterKind k);
RouterKind router_kind_from_name(const std::string& name);

enum class MissionStatus { Pending, InFlight, Completed, Rejected };

const char* mission_status_name(MissionStatus s);

struct RectArea {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive cells
  double launch_probability = 0.0;     // unused for landing areas and zones
};

struct Mission {
  std::uint64_t id = 0;
  TimeStep request_time = 0;
  int source_area = -1;
  int dest_area = -1;
  TSCell source;  // t filled at launch
  std::pair<int, int> dest_xy{0, 0};
  MissionStatus status = MissionStatus::Pending;
  TimeStep launch_time = -1;
  TimeStep arrival_time = -1;
  std::optional<Trajectory> trajectory;  // grid routers only
  std::int64_t route_pops = 0;
  int turns = 0;
  // Station index per in-flight step, -1 for a no-link step.
  std::vector<int> per_step_links;
  int no_link_steps = 0;
  std::vector<TimeStep> conflict_steps;  // deduplicated, ascending
  // Continuous-craft track (reactive runs): position per in-flight step.
  std::vector<Vec2> track;
  Vec2 position_m;
  Vec2 dest_m;
};

struct ThrustClassConfig {
  double small_equivalent_m = 90.0;
  double medium_equivalent_m = 180.0;
  double large_equivalent_m = 270.0;
  TurnKinematics turn;
  bool include_launch_transients = false;
};

struct Scenario {
  GridGeometry geometry = GridGeometry::make(528, 528, 18.0, 18.0);
  std::vector<RectArea> launch_areas;
  std::vector<RectArea> landing_areas;
  std::vector<RectArea> no_fly_zones;
  std::vector<BaseStation> stations;
  PathLossParams path_loss;
  // Seconds between mission-generation boundaries.
  double generation_interval_s = 10.0;
  TimeStep sim_length_steps = 20000;
  double separation_m = 18.0;
  RouterKind router = RouterKind::Srts;
  bool connectivity_check = false;
  // Negative means "use default_turn_penalty(geometry)".
  double turn_penalty_weight = -1.0;
  bool allow_wait = true;
  DeadlinePolicy deadline;
  PotentialFieldConfig reactive;
  ThrustClassConfig thrust;
  std::uint64_t seed = 1;
  int replications = 10;
  bool retry_rejected = false;
  TimeStep burn_in_steps = 0;
  // Steps at which channel-coverage snapshots are taken; when empty, the
  // fractions below are applied to sim_length_steps.
  std::vector<TimeStep> snapshot_steps;
  std::vector<double> snapshot_fractions{0.025, 0.25, 0.5, 0.99};
  std::string out_dir = "out";

  int generation_interval_steps() const;
  double resolved_turn_penalty() const;
  std::vector<TimeStep> resolved_snapshot_steps() const;
};

void validate_scenario(const Scenario& s);

// Per-replication (and aggregate) results.
struct MetricsReport {
  std::uint64_t seed = 0;
  double requests = 0;
  double launched = 0;   // throughput
  double completed = 0;
  double rejected = 0;
  double avg_flight_time_s = 0.0;
  double conflict_ratio = 0.0;  // launched missions with >= 1 conflict
  double no_link_rate = 0.0;    // launched missions with >= 1 no-link step
  double avg_in_flight = 0.0;
  double avg_turns = 0.0;
  double energy_per_s_small = 0.0;
  double energy_per_s_medium = 0.0;
  double energy_per_s_large = 0.0;
  double mean_route_pops = 0.0;
  double peak_live_entries = 0;
  // XY-volume of the densest live window a dense 3-D grid would allocate.
  double peak_dense_window_cells = 0;
  double sparsity_violations = 0;
  // Max craft per cell over the run, row-major.
  std::vector<int> density;
  std::map<TimeStep, std::vector<int>> coverage;
  std::vector<Mission> missions;  // replication reports only
};

struct RunOutput {
  std::vector<MetricsReport> replications;
  MetricsReport aggregate;  // arithmetic mean of scalar fields
};

class SimWorld {
 public:
  SimWorld(const Scenario& scenario, int replication_index);

  void step();
  MetricsReport run();

  TimeStep now() const { return t_; }
  const AirspaceEnv& env() const { return env_; }
  const std::vector<Mission>& missions() const { return missions_; }
  const ChannelLedger& ledger() const { return ledger_; }

  // Indices of missions currently in flight, ascending.
  const std::vector<std::size_t>& active() const { return active_; }

 private:
  void generate_missions();
  bool attempt_launch(Mission& m);
  void advance_active();
  void assign_channels();
  void detect_conflicts();
  void land_arrivals();
  Vec2 position_of(const Mission& m) const;
  std::vector<InFlightUas> in_flight_snapshot(TimeStep t) const;
  MetricsReport finalize();

  Scenario scn_;
  std::uint64_t world_seed_ = 0;
  AirspaceEnv env_;
  CommsModel comms_;
  ChannelLedger ledger_;
  std::vector<ObstacleRect> obstacle_rects_;
  std::mt19937_64 gen_rng_;
  std::mt19937_64 comms_rng_;
  TimeStep t_ = 0;
  std::vector<Mission> missions_;
  std::vector<std::size_t> pending_;
  std::vector<std::size_t> active_;

  // Accumulators.
  std::int64_t in_flight_steps_ = 0;
  std::int64_t counted_steps_ = 0;
  std::vector<int> density_;
  std::vector<int> density_now_;
  std::size_t peak_live_ = 0;
  std::size_t peak_dense_window_ = 0;
  std::int64_t sparsity_violations_ = 0;
  std::map<TimeStep, std::vector<int>> coverage_;
  std::vector<TimeStep> snapshot_steps_;
};

// Runs scenario.replications worlds with seeds seed, seed+1, ... and the
// arithmetic mean of their reports.
RunOutput run_scenario(const Scenario& scenario);

// Pairwise separation violations at one instant: craft closer than
// `separation_m` in Chebyshev distance (strictly), plus any craft inside a
// statically blocked cell. Returns involved indices, deduplicated.
std::vector<std::size_t> detect_conflicts(std::span<const Vec2> positions,
                                          double separation_m,
                                          const AirspaceEnv& env);

}  // namespace srts
