#include "srts/simkit.hpp"

#include <algorithm>
#include <cmath>

#include "srts/router_bfs.hpp"

namespace srts {

namespace {

// splitmix64: decorrelates the per-replication seed into stream seeds.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Heading changes along a continuous track; a change of 45 degrees or more
// between consecutive displacements counts as one turn.
int count_track_turns(const std::vector<Vec2>& track) {
  int turns = 0;
  Vec2 prev{0.0, 0.0};
  bool have_prev = false;
  for (std::size_t i = 1; i < track.size(); ++i) {
    const Vec2 d = track[i] - track[i - 1];
    if (d.norm() < 1e-9) continue;
    if (have_prev) {
      const double cos_angle =
          (d.x * prev.x + d.y * prev.y) / (d.norm() * prev.norm());
      if (cos_angle <= std::cos(3.14159265358979323846 / 4.0) + 1e-12)
        ++turns;
    }
    prev = d;
    have_prev = true;
  }
  return turns;
}

struct TrackCost {
  double length_m = 0.0;
  double sum_abs_acc = 0.0;
  double duration_s = 0.0;
};

TrackCost track_cost(const std::vector<Vec2>& track, double step_seconds) {
  TrackCost c;
  c.duration_s = track.empty() ? 0.0 : (track.size() - 1) * step_seconds;
  Vec2 prev_v{0.0, 0.0};
  for (std::size_t i = 1; i < track.size(); ++i) {
    const Vec2 d = track[i] - track[i - 1];
    c.length_m += d.norm();
    const Vec2 v = d * (1.0 / step_seconds);
    if (i > 1) c.sum_abs_acc += (v - prev_v).norm();
    prev_v = v;
  }
  return c;
}

}  // namespace

const char* router_kind_name(RouterKind k) {
  switch (k) {
    case RouterKind::None: return "none";
    case RouterKind::Bfs: return "bfs";
    case RouterKind::Srts: return "srts";
    case RouterKind::Reactive: return "reactive";
  }
  return "?";
}

RouterKind router_kind_from_name(const std::string& name) {
  if (name == "none") return RouterKind::None;
  if (name == "bfs") return RouterKind::Bfs;
  if (name == "srts") return RouterKind::Srts;
  if (name == "reactive") return RouterKind::Reactive;
  throw ConfigError("router", "unknown router '" + name + "'");
}

const char* mission_status_name(MissionStatus s) {
  switch (s) {
    case MissionStatus::Pending: return "pending";
    case MissionStatus::InFlight: return "in_flight";
    case MissionStatus::Completed: return "completed";
    case MissionStatus::Rejected: return "rejected";
  }
  return "?";
}

int Scenario::generation_interval_steps() const {
  return static_cast<int>(
      std::lround(generation_interval_s / geometry.step_seconds));
}

double Scenario::resolved_turn_penalty() const {
  return turn_penalty_weight < 0.0 ? default_turn_penalty(geometry)
                                   : turn_penalty_weight;
}

std::vector<TimeStep> Scenario::resolved_snapshot_steps() const {
  if (!snapshot_steps.empty()) return snapshot_steps;
  std::vector<TimeStep> steps;
  for (double f : snapshot_fractions) {
    const TimeStep t = static_cast<TimeStep>(f * sim_length_steps);
    if (t >= 0 && t < sim_length_steps) steps.push_back(t);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

namespace {

void validate_rect(const RectArea& r, const GridGeometry& geom,
                   const std::string& field, bool wants_probability) {
  if (r.x0 > r.x1 || r.y0 > r.y1)
    throw ConfigError(field, "rect corners are swapped");
  if (!geom.in_bounds(r.x0, r.y0) || !geom.in_bounds(r.x1, r.y1))
    throw ConfigError(field, "rect leaves the grid");
  if (wants_probability &&
      (r.launch_probability < 0.0 || r.launch_probability > 1.0))
    throw ConfigError(field + ".probability", "must be within [0, 1]");
}

}  // namespace

void validate_scenario(const Scenario& s) {
  try {
    s.geometry.validate();
  } catch (const InputError& e) {
    throw ConfigError("geometry", e.what());
  }
  for (std::size_t i = 0; i < s.launch_areas.size(); ++i)
    validate_rect(s.launch_areas[i], s.geometry,
                  "launch_areas[" + std::to_string(i) + "]", true);
  for (std::size_t i = 0; i < s.landing_areas.size(); ++i)
    validate_rect(s.landing_areas[i], s.geometry,
                  "landing_areas[" + std::to_string(i) + "]", false);
  for (std::size_t i = 0; i < s.no_fly_zones.size(); ++i)
    validate_rect(s.no_fly_zones[i], s.geometry,
                  "no_fly_zones[" + std::to_string(i) + "]", false);
  if (!s.launch_areas.empty() && s.landing_areas.empty())
    throw ConfigError("landing_areas",
                      "required when launch areas are configured");
  for (std::size_t i = 0; i < s.stations.size(); ++i)
    if (s.stations[i].channel_count < 0)
      throw ConfigError("stations[" + std::to_string(i) + "].channels",
                        "must be non-negative");
  const PathLossParams& pl = s.path_loss;
  if (pl.ref_distance_m <= 0.0)
    throw ConfigError("path_loss.ref_distance_m", "must be positive");
  if (pl.exponent_los <= 0.0 || pl.exponent_nlos <= 0.0)
    throw ConfigError("path_loss.exponent", "must be positive");
  if (pl.los_probability < 0.0 || pl.los_probability > 1.0)
    throw ConfigError("path_loss.los_probability", "must be within [0, 1]");
  if (pl.shadowing_db < 0.0)
    throw ConfigError("path_loss.shadowing_db", "must be non-negative");
  if (s.generation_interval_s <= 0.0)
    throw ConfigError("generation_interval_s", "must be positive");
  if (s.generation_interval_steps() < 1)
    throw ConfigError("generation_interval_s",
                      "must round to at least one step");
  if (s.sim_length_steps < 0)
    throw ConfigError("sim_length_steps", "must be non-negative");
  if (s.separation_m <= 0.0)
    throw ConfigError("separation_m", "must be positive");
  if (s.turn_penalty_weight > 0.0 && s.turn_penalty_weight >= 1.0)
    throw ConfigError("turn_penalty_weight", "must stay below 1");
  if (s.replications < 1)
    throw ConfigError("replications", "must be at least 1");
  if (s.burn_in_steps < 0 || s.burn_in_steps > s.sim_length_steps)
    throw ConfigError("burn_in_steps", "must be within [0, sim_length_steps]");
  for (double f : s.snapshot_fractions)
    if (f < 0.0 || f >= 1.0)
      throw ConfigError("snapshot_fractions", "must be within [0, 1)");
  for (TimeStep t : s.snapshot_steps)
    if (t < 0 || t >= std::max<TimeStep>(s.sim_length_steps, 1))
      throw ConfigError("snapshot_steps", "must be within the run");
  const ThrustClassConfig& tc = s.thrust;
  if (tc.small_equivalent_m <= 0.0 ||
      tc.medium_equivalent_m <= tc.small_equivalent_m ||
      tc.large_equivalent_m <= tc.medium_equivalent_m)
    throw ConfigError("thrust", "class equivalents must ascend: small < "
                                "medium < large, all positive");
  if (tc.turn.radius_m <= 0.0)
    throw ConfigError("thrust.turn_radius_m", "must be positive");
  const PotentialFieldConfig& rf = s.reactive;
  if (rf.attract_gain < 0.0 || rf.repulse_gain < 0.0)
    throw ConfigError("reactive", "gains must be non-negative");
  if (rf.sensing_radius_m <= 0.0)
    throw ConfigError("reactive.sensing_radius_m", "must be positive");
  if (rf.max_speed_mps <= 0.0)
    throw ConfigError("reactive.max_speed_mps", "must be positive");
  if (rf.min_distance_m <= 0.0)
    throw ConfigError("reactive.min_distance_m", "must be positive");
}

SimWorld::SimWorld(const Scenario& scenario, int replication_index)
    : scn_(scenario),
      world_seed_(scenario.seed + static_cast<std::uint64_t>(replication_index)),
      env_(scenario.geometry),
      comms_(scenario.stations, scenario.path_loss),
      gen_rng_(mix64(world_seed_ ^ 0x67656e5f726e67ull)),
      comms_rng_(mix64(world_seed_ ^ 0x636f6d6d735f72ull)) {
  validate_scenario(scn_);
  for (const RectArea& z : scn_.no_fly_zones) {
    env_.add_no_fly_rect(z.x0, z.y0, z.x1, z.y1);
    const double w = scn_.geometry.cell_size_m;
    obstacle_rects_.push_back(
        {z.x0 * w, z.y0 * w, (z.x1 + 1) * w, (z.y1 + 1) * w});
  }
  density_.assign(scn_.geometry.cell_count(), 0);
  density_now_.assign(scn_.geometry.cell_count(), 0);
  snapshot_steps_ = scn_.resolved_snapshot_steps();
  std::sort(snapshot_steps_.begin(), snapshot_steps_.end());
}

std::vector<InFlightUas> SimWorld::in_flight_snapshot(TimeStep t) const {
  std::vector<InFlightUas> out;
  for (std::size_t idx : active_) {
    const Mission& m = missions_[idx];
    if (m.status != MissionStatus::InFlight || !m.trajectory) continue;
    const TimeStep arrival = m.trajectory->cells.back().t;
    if (t < m.launch_time || t > arrival) continue;
    const TSCell& c = m.trajectory->cells[static_cast<std::size_t>(
        t - m.launch_time)];
    out.push_back({m.id, scn_.geometry.cell_center_m(c.x, c.y)});
  }
  return out;
}

void SimWorld::generate_missions() {
  for (std::size_t a = 0; a < scn_.launch_areas.size(); ++a) {
    const RectArea& area = scn_.launch_areas[a];
    if (uniform01(gen_rng_) >= area.launch_probability) continue;
    Mission m;
    m.id = missions_.size();
    m.request_time = t_;
    m.source_area = static_cast<int>(a);
    m.source = {uniform_int(gen_rng_, area.x0, area.x1),
                uniform_int(gen_rng_, area.y0, area.y1), 0};
    m.dest_area = uniform_int(
        gen_rng_, 0, static_cast<int>(scn_.landing_areas.size()) - 1);
    const RectArea& dest = scn_.landing_areas[m.dest_area];
    m.dest_xy = {uniform_int(gen_rng_, dest.x0, dest.x1),
                 uniform_int(gen_rng_, dest.y0, dest.y1)};
    pending_.push_back(missions_.size());
    missions_.push_back(std::move(m));
  }
}

bool SimWorld::attempt_launch(Mission& m) {
  m.source.t = t_;
  const GridGeometry& geom = scn_.geometry;
  switch (scn_.router) {
    case RouterKind::None: {
      // Unmanaged shortest Manhattan path, east/west leg first.
      Trajectory traj;
      TSCell c = m.source;
      traj.cells.push_back(c);
      while (c.x != m.dest_xy.first) {
        c.x += c.x < m.dest_xy.first ? 1 : -1;
        ++c.t;
        traj.cells.push_back(c);
      }
      while (c.y != m.dest_xy.second) {
        c.y += c.y < m.dest_xy.second ? 1 : -1;
        ++c.t;
        traj.cells.push_back(c);
      }
      m.trajectory = std::move(traj);
      break;
    }
    case RouterKind::Reactive: {
      m.position_m = geom.cell_center_m(m.source.x, m.source.y);
      m.dest_m = geom.cell_center_m(m.dest_xy.first, m.dest_xy.second);
      m.track.clear();
      m.track.push_back(m.position_m);
      break;
    }
    case RouterKind::Bfs: {
      if (env_.occupancy(m.source) != 0 ||
          env_.static_blocked(m.dest_xy.first, m.dest_xy.second))
        return false;
      const TimeStep deadline = scn_.deadline.deadline_for(
          m.source, m.dest_xy.first, m.dest_xy.second);
      RouteResult r = route_bfs(env_, m.source, m.dest_xy, deadline);
      m.route_pops = r.expanded_nodes;
      if (!r.trajectory) return false;
      m.trajectory = std::move(r.trajectory);
      break;
    }
    case RouterKind::Srts: {
      if (env_.occupancy(m.source) != 0 ||
          env_.static_blocked(m.dest_xy.first, m.dest_xy.second))
        return false;
      RoutingConfig cfg;
      cfg.turn_penalty_weight = scn_.resolved_turn_penalty();
      cfg.connectivity_check = scn_.connectivity_check;
      cfg.allow_wait = scn_.allow_wait;
      cfg.deadline = scn_.deadline;
      SignalBelief belief(comms_, geom, [this](TimeStep t) {
        return in_flight_snapshot(t);
      });
      RouteResult r = route_srts(env_, &belief, m.source, m.dest_xy, cfg);
      m.route_pops = r.expanded_nodes;
      if (!r.trajectory) return false;
      m.trajectory = std::move(r.trajectory);
      break;
    }
  }
  m.status = MissionStatus::InFlight;
  m.launch_time = t_;
  if (m.trajectory) m.turns = count_turns(*m.trajectory);
  // Degenerate request with source == destination: done on the spot.
  const bool already_there =
      m.trajectory ? m.trajectory->steps() == 0 : m.position_m == m.dest_m;
  if (already_there) {
    m.status = MissionStatus::Completed;
    m.arrival_time = t_;
    return true;
  }
  active_.push_back(static_cast<std::size_t>(m.id));
  return true;
}

Vec2 SimWorld::position_of(const Mission& m) const {
  if (m.trajectory) {
    const std::size_t i = static_cast<std::size_t>(
        std::min<TimeStep>(t_ - m.launch_time,
                           static_cast<TimeStep>(m.trajectory->steps())));
    const TSCell& c = m.trajectory->cells[i];
    return scn_.geometry.cell_center_m(c.x, c.y);
  }
  return m.position_m;
}

void SimWorld::advance_active() {
  // Reactive craft steer off a simultaneous snapshot of everyone else;
  // grid craft simply follow their reserved cells.
  if (scn_.router == RouterKind::Reactive) {
    std::vector<Vec2> old_pos;
    old_pos.reserve(active_.size());
    for (std::size_t idx : active_) old_pos.push_back(missions_[idx].position_m);
    std::vector<Vec2> neighbors;
    for (std::size_t i = 0; i < active_.size(); ++i) {
      Mission& m = missions_[active_[i]];
      neighbors.clear();
      for (std::size_t j = 0; j < active_.size(); ++j)
        if (j != i) neighbors.push_back(old_pos[j]);
      m.position_m = reactive_step(old_pos[i], m.dest_m, neighbors,
                                   obstacle_rects_, scn_.reactive,
                                   scn_.geometry.step_seconds);
      m.track.push_back(m.position_m);
    }
  }
}

void SimWorld::assign_channels() {
  std::vector<InFlightUas> craft;
  craft.reserve(active_.size());
  for (std::size_t idx : active_)
    craft.push_back({missions_[idx].id, position_of(missions_[idx])});
  const std::vector<LinkResult> links =
      comms_.ground_truth_assign(craft, t_, comms_rng_, ledger_);
  for (std::size_t i = 0; i < active_.size(); ++i) {
    Mission& m = missions_[active_[i]];
    m.per_step_links.push_back(links[i].station);
    if (!links[i].linked()) ++m.no_link_steps;
  }
}

std::vector<std::size_t> detect_conflicts(std::span<const Vec2> positions,
                                          double separation_m,
                                          const AirspaceEnv& env) {
  std::vector<std::size_t> involved;
  // Bucket by separation-sized squares; conflicting pairs always fall in
  // the same or adjacent buckets.
  std::map<std::pair<long, long>, std::vector<std::size_t>> buckets;
  auto bucket_of = [&](const Vec2& p) {
    return std::pair<long, long>{
        static_cast<long>(std::floor(p.x / separation_m)),
        static_cast<long>(std::floor(p.y / separation_m))};
  };
  for (std::size_t i = 0; i < positions.size(); ++i)
    buckets[bucket_of(positions[i])].push_back(i);

  std::vector<std::uint8_t> hit(positions.size(), 0);
  for (const auto& [key, members] : buckets) {
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find({key.first + dx, key.second + dy});
        if (it == buckets.end()) continue;
        for (std::size_t i : members) {
          for (std::size_t j : it->second) {
            if (j <= i) continue;
            const double cheb =
                std::max(std::abs(positions[i].x - positions[j].x),
                         std::abs(positions[i].y - positions[j].y));
            if (cheb < separation_m) hit[i] = hit[j] = 1;
          }
        }
      }
    }
  }
  // A craft inside a statically blocked cell is also in conflict.
  const GridGeometry& geom = env.geometry();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const int cx = static_cast<int>(std::floor(positions[i].x /
                                               geom.cell_size_m));
    const int cy = static_cast<int>(std::floor(positions[i].y /
                                               geom.cell_size_m));
    if (geom.in_bounds(cx, cy) && env.static_blocked(cx, cy)) hit[i] = 1;
  }
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (hit[i]) involved.push_back(i);
  return involved;
}

void SimWorld::detect_conflicts() {
  std::vector<Vec2> positions;
  positions.reserve(active_.size());
  for (std::size_t idx : active_) positions.push_back(position_of(missions_[idx]));
  for (std::size_t i : srts::detect_conflicts(positions, scn_.separation_m,
                                              env_)) {
    Mission& m = missions_[active_[i]];
    if (m.conflict_steps.empty() || m.conflict_steps.back() != t_)
      m.conflict_steps.push_back(t_);
  }
}

void SimWorld::land_arrivals() {
  std::vector<std::size_t> still_flying;
  still_flying.reserve(active_.size());
  for (std::size_t idx : active_) {
    Mission& m = missions_[idx];
    bool arrived = false;
    if (m.trajectory) {
      arrived = t_ - m.launch_time >=
                static_cast<TimeStep>(m.trajectory->steps());
    } else {
      arrived = m.position_m == m.dest_m;
    }
    if (arrived) {
      m.status = MissionStatus::Completed;
      m.arrival_time = t_;
    } else {
      still_flying.push_back(idx);
    }
  }
  active_ = std::move(still_flying);
}

void SimWorld::step() {
  const TimeStep t = t_;
  env_.instant_refresh(t);

  // Sparse-store accounting against the reservations still outstanding.
  std::size_t expected = 0;
  for (std::size_t idx : active_) {
    const Mission& m = missions_[idx];
    if (m.status == MissionStatus::InFlight && m.trajectory)
      expected += static_cast<std::size_t>(
          m.trajectory->cells.back().t - t + 1);
  }
  const std::size_t live = env_.live_entry_count();
  if (live > expected) ++sparsity_violations_;
  if (t >= scn_.burn_in_steps) {
    peak_live_ = std::max(peak_live_, live);
    if (live > 0) {
      const std::size_t window =
          static_cast<std::size_t>(env_.horizon() - t + 1) *
          scn_.geometry.cell_count();
      peak_dense_window_ = std::max(peak_dense_window_, window);
    }
  }

  advance_active();
  assign_channels();
  detect_conflicts();

  // Per-step statistics cover the craft that flew during this step, before
  // any launch at this boundary.
  const std::vector<std::size_t> flew = active_;

  land_arrivals();

  if (scn_.generation_interval_steps() > 0 &&
      t % scn_.generation_interval_steps() == 0) {
    generate_missions();
    std::vector<std::size_t> still_pending;
    for (std::size_t idx : pending_) {
      Mission& m = missions_[idx];
      if (attempt_launch(m)) continue;
      if (scn_.retry_rejected) {
        still_pending.push_back(idx);
      } else {
        m.status = MissionStatus::Rejected;
      }
    }
    pending_ = std::move(still_pending);
    // Retried launches can interleave ids; channel assignment needs the
    // active list ascending.
    std::sort(active_.begin(), active_.end());
  }

  if (t >= scn_.burn_in_steps) {
    in_flight_steps_ += static_cast<std::int64_t>(flew.size());
    ++counted_steps_;
    std::fill(density_now_.begin(), density_now_.end(), 0);
    for (std::size_t idx : flew) {
      const Vec2 p = position_of(missions_[idx]);
      const int cx = static_cast<int>(std::floor(p.x /
                                                 scn_.geometry.cell_size_m));
      const int cy = static_cast<int>(std::floor(p.y /
                                                 scn_.geometry.cell_size_m));
      if (scn_.geometry.in_bounds(cx, cy))
        ++density_now_[static_cast<std::size_t>(cy) *
                           scn_.geometry.width_cells +
                       cx];
    }
    for (std::size_t i = 0; i < density_.size(); ++i)
      density_[i] = std::max(density_[i], density_now_[i]);
  }

  if (std::binary_search(snapshot_steps_.begin(), snapshot_steps_.end(), t))
    coverage_[t] = comms_.coverage_snapshot(ledger_, t, scn_.geometry);

  ledger_.drop_before(t - 1);
  ++t_;
}

MetricsReport SimWorld::finalize() {
  MetricsReport r;
  r.seed = world_seed_;
  r.requests = static_cast<double>(missions_.size());

  double launched = 0, completed = 0, rejected = 0;
  double flight_s = 0.0, turns = 0.0, pops = 0.0;
  double with_conflict = 0, with_no_link = 0;
  double e_small = 0, e_medium = 0, e_large = 0, e_count = 0;

  const double delta = scn_.geometry.step_seconds;
  const TurnKinematics& kin = scn_.thrust.turn;
  const double beta_small = calibrate_beta_alpha(
      scn_.thrust.small_equivalent_m, scn_.geometry.cruise_speed_mps, kin,
      delta);
  const double beta_medium = calibrate_beta_alpha(
      scn_.thrust.medium_equivalent_m, scn_.geometry.cruise_speed_mps, kin,
      delta);
  const double beta_large = calibrate_beta_alpha(
      scn_.thrust.large_equivalent_m, scn_.geometry.cruise_speed_mps, kin,
      delta);

  for (Mission& m : missions_) {
    if (m.status == MissionStatus::Rejected) {
      ++rejected;
      continue;
    }
    if (m.status == MissionStatus::Pending) continue;
    ++launched;
    if (!m.trajectory && !m.track.empty()) m.turns = count_track_turns(m.track);
    turns += m.turns;
    pops += static_cast<double>(m.route_pops);
    if (!m.conflict_steps.empty()) ++with_conflict;
    if (m.no_link_steps > 0) ++with_no_link;
    if (m.status != MissionStatus::Completed) continue;
    ++completed;
    flight_s += (m.arrival_time - m.launch_time) * delta;

    double length_m = 0.0, sum_acc = 0.0, duration = 0.0;
    if (m.trajectory) {
      const VelocityProfile profile = profile_from_trajectory(
          *m.trajectory, scn_.geometry,
          scn_.thrust.include_launch_transients);
      length_m = path_length_m(*m.trajectory, scn_.geometry);
      sum_acc = sum_abs_acceleration(profile);
      duration = static_cast<double>(m.trajectory->steps()) * delta;
    } else {
      const TrackCost c = track_cost(m.track, delta);
      length_m = c.length_m;
      sum_acc = c.sum_abs_acc;
      duration = c.duration_s;
    }
    if (duration > 0.0) {
      e_small += (length_m + beta_small * sum_acc) / duration;
      e_medium += (length_m + beta_medium * sum_acc) / duration;
      e_large += (length_m + beta_large * sum_acc) / duration;
      ++e_count;
    }
  }

  r.launched = launched;
  r.completed = completed;
  r.rejected = rejected;
  r.avg_flight_time_s = completed > 0 ? flight_s / completed : 0.0;
  r.conflict_ratio = launched > 0 ? with_conflict / launched : 0.0;
  r.no_link_rate = launched > 0 ? with_no_link / launched : 0.0;
  r.avg_in_flight = counted_steps_ > 0
                        ? static_cast<double>(in_flight_steps_) /
                              static_cast<double>(counted_steps_)
                        : 0.0;
  r.avg_turns = launched > 0 ? turns / launched : 0.0;
  r.energy_per_s_small = e_count > 0 ? e_small / e_count : 0.0;
  r.energy_per_s_medium = e_count > 0 ? e_medium / e_count : 0.0;
  r.energy_per_s_large = e_count > 0 ? e_large / e_count : 0.0;
  r.mean_route_pops = launched > 0 ? pops / launched : 0.0;
  r.peak_live_entries = static_cast<double>(peak_live_);
  r.peak_dense_window_cells = static_cast<double>(peak_dense_window_);
  r.sparsity_violations = static_cast<double>(sparsity_violations_);
  r.density = density_;
  r.coverage = coverage_;
  r.missions = missions_;
  return r;
}

MetricsReport SimWorld::run() {
  while (t_ < scn_.sim_length_steps) step();
  return finalize();
}

RunOutput run_scenario(const Scenario& scenario) {
  validate_scenario(scenario);
  RunOutput out;
  for (int rep = 0; rep < scenario.replications; ++rep) {
    SimWorld world(scenario, rep);
    out.replications.push_back(world.run());
  }

  MetricsReport& agg = out.aggregate;
  agg.seed = scenario.seed;
  const double n = static_cast<double>(out.replications.size());
  agg.density.assign(scenario.geometry.cell_count(), 0);
  for (const MetricsReport& r : out.replications) {
    agg.requests += r.requests / n;
    agg.launched += r.launched / n;
    agg.completed += r.completed / n;
    agg.rejected += r.rejected / n;
    agg.avg_flight_time_s += r.avg_flight_time_s / n;
    agg.conflict_ratio += r.conflict_ratio / n;
    agg.no_link_rate += r.no_link_rate / n;
    agg.avg_in_flight += r.avg_in_flight / n;
    agg.avg_turns += r.avg_turns / n;
    agg.energy_per_s_small += r.energy_per_s_small / n;
    agg.energy_per_s_medium += r.energy_per_s_medium / n;
    agg.energy_per_s_large += r.energy_per_s_large / n;
    agg.mean_route_pops += r.mean_route_pops / n;
    agg.peak_live_entries += r.peak_live_entries / n;
    agg.peak_dense_window_cells += r.peak_dense_window_cells / n;
    agg.sparsity_violations += r.sparsity_violations / n;
    for (std::size_t i = 0; i < agg.density.size(); ++i)
      agg.density[i] = std::max(agg.density[i], r.density[i]);
  }
  if (!out.replications.empty()) agg.coverage = out.replications[0].coverage;
  return out;
}

}  // namespace srts
