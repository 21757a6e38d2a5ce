// Ground-station link model: log-distance path loss, per-timestep channel
// ledger, the planning-time signal check and the ground-truth channel
// assignment executed by the simulation.
//
// The signal check is the router's belief: it assumes line of sight
// everywhere, trial-allocates channels for the craft already in flight and
// asks whether some station still has a free channel within the loss
// threshold. The trial allocation is scratch work; the shared ledger is
// never touched by planning.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "srts/types.hpp"

namespace srts {

struct PathLossParams {
  double ref_distance_m = 1.0;
  double ref_loss_db = 38.0;
  double exponent_los = 3.0;
  double exponent_nlos = 3.5;
  double los_probability = 0.9;
  // Std-dev of the zero-mean Gaussian shadowing term applied by the ground
  // truth sampler. The planning belief always uses 0.
  double shadowing_db = 0.0;
  double loss_threshold_db = 140.0;
};

struct PathLossValue {
  double db = 0.0;
  // True when d < ref_distance_m and the loss was clamped to ref_loss_db.
  bool near_field = false;
};

// Log-distance loss at distance d_m for the given exponent.
PathLossValue path_loss(double d_m, double exponent,
                        const PathLossParams& params);

struct BaseStation {
  Vec2 position_m;
  int channel_count = 8;
};

struct InFlightUas {
  std::uint64_t id = 0;
  Vec2 position_m;
};

struct LinkResult {
  std::uint64_t id = 0;
  int station = -1;  // -1 when no admissible station had a free channel
  bool linked() const { return station >= 0; }
};

// Channel assignments per timestep: station index -> craft ids, in
// assignment order. Capacity bookkeeping for snapshots and conservation
// checks.
class ChannelLedger {
 public:
  void begin_step(TimeStep t, std::size_t station_count);
  void assign(TimeStep t, int station, std::uint64_t uas_id);
  int used(TimeStep t, int station) const;
  // Craft ids per station at t, or nullptr when the step was never begun.
  const std::vector<std::vector<std::uint64_t>>* at(TimeStep t) const;
  std::size_t total_assigned(TimeStep t) const;
  void drop_before(TimeStep t);
  bool empty() const { return by_t_.empty(); }

 private:
  std::map<TimeStep, std::vector<std::vector<std::uint64_t>>> by_t_;
};

class CommsModel {
 public:
  CommsModel(std::vector<BaseStation> stations, PathLossParams params);

  const std::vector<BaseStation>& stations() const { return stations_; }
  const PathLossParams& params() const { return params_; }

  // Line-of-sight loss from pos to station i, near-field clamped.
  double los_loss_db(const Vec2& pos, std::size_t i) const;

  // Trial-allocates channels for `in_flight` (ascending id) under the
  // line-of-sight belief and reports per-station used counts. Shared with
  // the ground-truth sampler so planning and execution agree whenever the
  // sampled exponents match the belief.
  std::vector<int> trial_used_counts(std::span<const InFlightUas> in_flight)
      const;

  // Planning-time admission: true when, after the trial allocation, some
  // station within the loss threshold still has a free channel. Stations
  // are scanned by ascending distance from pos.
  bool signal_check(const Vec2& pos,
                    std::span<const InFlightUas> in_flight) const;

  // signal_check with a precomputed trial allocation (see trial_used_counts).
  bool admissible_with_used(const Vec2& pos, std::span<const int> used) const;

  // Samples LoS/NLoS per (craft, station), then greedily assigns each craft
  // (ascending id) the lowest-loss admissible station with a free channel.
  // Records assignments in the ledger under t and returns one LinkResult per
  // craft, in input order.
  std::vector<LinkResult> ground_truth_assign(
      std::span<const InFlightUas> active, TimeStep t, std::mt19937_64& rng,
      ChannelLedger& ledger) const;

  // Free channels visible from each cell at t: for the station with the
  // lowest admissible LoS loss, channel_count - used; 0 when no station is
  // within the threshold. Row-major, row y = 0 first.
  std::vector<int> coverage_snapshot(const ChannelLedger& ledger, TimeStep t,
                                     const GridGeometry& geom) const;

 private:
  // Greedy argmin-loss allocation used by both routes. loss(craft, station)
  // returns the modeled loss in dB.
  template <typename LossFn>
  std::vector<int> allocate(std::span<const InFlightUas> craft, LossFn loss,
                            std::vector<int>* stations_out) const;

  std::vector<BaseStation> stations_;
  PathLossParams params_;
};

// Memoizing admission view used during a single route call: the in-flight
// set is fixed while planning, so the trial allocation per timestep is
// computed once and reused.
class SignalBelief {
 public:
  using Provider = std::function<std::vector<InFlightUas>(TimeStep)>;

  SignalBelief(const CommsModel& comms, const GridGeometry& geom,
               Provider in_flight_at);

  bool admissible(const TSCell& cell) const;

 private:
  const CommsModel& comms_;
  GridGeometry geom_;
  Provider in_flight_at_;
  mutable std::unordered_map<TimeStep, std::vector<int>> used_by_t_;
};

}  // namespace srts
