#include "srts/comms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srts {

PathLossValue path_loss(double d_m, double exponent,
                        const PathLossParams& params) {
  if (d_m < 0.0) throw InputError("path loss distance must be non-negative");
  if (d_m < params.ref_distance_m) return {params.ref_loss_db, true};
  return {params.ref_loss_db +
              10.0 * exponent * std::log10(d_m / params.ref_distance_m),
          false};
}

void ChannelLedger::begin_step(TimeStep t, std::size_t station_count) {
  by_t_[t].assign(station_count, {});
}

void ChannelLedger::assign(TimeStep t, int station, std::uint64_t uas_id) {
  auto it = by_t_.find(t);
  if (it == by_t_.end()) throw InputError("ledger step was never begun");
  auto& per_station = it->second;
  if (station < 0 || station >= static_cast<int>(per_station.size()))
    throw InputError("ledger station index out of range");
  per_station[station].push_back(uas_id);
}

int ChannelLedger::used(TimeStep t, int station) const {
  auto it = by_t_.find(t);
  if (it == by_t_.end()) throw InputError("ledger step was never begun");
  if (station < 0 || station >= static_cast<int>(it->second.size()))
    throw InputError("ledger station index out of range");
  return static_cast<int>(it->second[station].size());
}

const std::vector<std::vector<std::uint64_t>>* ChannelLedger::at(
    TimeStep t) const {
  auto it = by_t_.find(t);
  return it == by_t_.end() ? nullptr : &it->second;
}

std::size_t ChannelLedger::total_assigned(TimeStep t) const {
  auto it = by_t_.find(t);
  if (it == by_t_.end()) return 0;
  std::size_t total = 0;
  for (const auto& ids : it->second) total += ids.size();
  return total;
}

void ChannelLedger::drop_before(TimeStep t) {
  by_t_.erase(by_t_.begin(), by_t_.lower_bound(t));
}

CommsModel::CommsModel(std::vector<BaseStation> stations,
                       PathLossParams params)
    : stations_(std::move(stations)), params_(params) {
  for (const BaseStation& s : stations_)
    if (s.channel_count < 0)
      throw InputError("station channel count must be non-negative");
}

double CommsModel::los_loss_db(const Vec2& pos, std::size_t i) const {
  return path_loss((pos - stations_[i].position_m).norm(),
                   params_.exponent_los, params_)
      .db;
}

template <typename LossFn>
std::vector<int> CommsModel::allocate(std::span<const InFlightUas> craft,
                                      LossFn loss,
                                      std::vector<int>* stations_out) const {
  std::vector<int> used(stations_.size(), 0);
  if (stations_out) stations_out->assign(craft.size(), -1);
  for (std::size_t c = 0; c < craft.size(); ++c) {
    int best = -1;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < stations_.size(); ++s) {
      const double l = loss(c, s);
      if (l > params_.loss_threshold_db) continue;
      if (used[s] >= stations_[s].channel_count) continue;
      if (l < best_loss) {
        best_loss = l;
        best = static_cast<int>(s);
      }
    }
    if (best >= 0) {
      ++used[best];
      if (stations_out) (*stations_out)[c] = best;
    }
  }
  return used;
}

std::vector<int> CommsModel::trial_used_counts(
    std::span<const InFlightUas> in_flight) const {
  std::vector<InFlightUas> sorted(in_flight.begin(), in_flight.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const InFlightUas& a, const InFlightUas& b) {
              return a.id < b.id;
            });
  return allocate(
      sorted,
      [&](std::size_t c, std::size_t s) {
        return los_loss_db(sorted[c].position_m, s);
      },
      nullptr);
}

bool CommsModel::admissible_with_used(const Vec2& pos,
                                      std::span<const int> used) const {
  if (used.size() != stations_.size())
    throw InputError("trial allocation size does not match stations");
  // Scan by ascending distance; station index breaks ties.
  std::vector<std::size_t> order(stations_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = (pos - stations_[a].position_m).norm();
    const double db = (pos - stations_[b].position_m).norm();
    if (da != db) return da < db;
    return a < b;
  });
  for (std::size_t s : order) {
    if (used[s] >= stations_[s].channel_count) continue;
    if (los_loss_db(pos, s) <= params_.loss_threshold_db) return true;
  }
  return false;
}

bool CommsModel::signal_check(const Vec2& pos,
                              std::span<const InFlightUas> in_flight) const {
  return admissible_with_used(pos, trial_used_counts(in_flight));
}

std::vector<LinkResult> CommsModel::ground_truth_assign(
    std::span<const InFlightUas> active, TimeStep t, std::mt19937_64& rng,
    ChannelLedger& ledger) const {
  for (std::size_t c = 1; c < active.size(); ++c)
    if (active[c].id <= active[c - 1].id)
      throw InputError("ground truth craft must be sorted by ascending id");

  // One LoS draw per (craft, station), craft-major, so the stream is a
  // fixed function of the active set size.
  std::vector<double> loss(active.size() * std::max<std::size_t>(
                                               stations_.size(), 1));
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (std::size_t c = 0; c < active.size(); ++c) {
    for (std::size_t s = 0; s < stations_.size(); ++s) {
      const bool los = uniform() < params_.los_probability;
      const double exponent =
          los ? params_.exponent_los : params_.exponent_nlos;
      double l = path_loss((active[c].position_m - stations_[s].position_m)
                               .norm(),
                           exponent, params_)
                     .db;
      if (params_.shadowing_db > 0.0) {
        std::normal_distribution<double> shadow(0.0, params_.shadowing_db);
        l += shadow(rng);
      }
      loss[c * stations_.size() + s] = l;
    }
  }

  std::vector<int> chosen;
  allocate(
      active,
      [&](std::size_t c, std::size_t s) { return loss[c * stations_.size() + s]; },
      &chosen);

  ledger.begin_step(t, stations_.size());
  std::vector<LinkResult> results(active.size());
  for (std::size_t c = 0; c < active.size(); ++c) {
    results[c] = {active[c].id, chosen[c]};
    if (chosen[c] >= 0) ledger.assign(t, chosen[c], active[c].id);
  }
  return results;
}

std::vector<int> CommsModel::coverage_snapshot(const ChannelLedger& ledger,
                                               TimeStep t,
                                               const GridGeometry& geom) const {
  const auto* per_station = ledger.at(t);
  if (!per_station) throw InputError("coverage snapshot at an unbegun step");
  std::vector<int> grid(geom.cell_count(), 0);
  for (int y = 0; y < geom.height_cells; ++y) {
    for (int x = 0; x < geom.width_cells; ++x) {
      const Vec2 pos = geom.cell_center_m(x, y);
      int best = -1;
      double best_loss = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < stations_.size(); ++s) {
        const double l = los_loss_db(pos, s);
        if (l > params_.loss_threshold_db) continue;
        if (l < best_loss) {
          best_loss = l;
          best = static_cast<int>(s);
        }
      }
      if (best >= 0) {
        const int free = stations_[best].channel_count -
                         static_cast<int>((*per_station)[best].size());
        grid[static_cast<std::size_t>(y) * geom.width_cells + x] =
            std::max(free, 0);
      }
    }
  }
  return grid;
}

SignalBelief::SignalBelief(const CommsModel& comms, const GridGeometry& geom,
                           Provider in_flight_at)
    : comms_(comms), geom_(geom), in_flight_at_(std::move(in_flight_at)) {}

bool SignalBelief::admissible(const TSCell& cell) const {
  auto it = used_by_t_.find(cell.t);
  if (it == used_by_t_.end()) {
    const std::vector<InFlightUas> flights =
        in_flight_at_ ? in_flight_at_(cell.t) : std::vector<InFlightUas>{};
    it = used_by_t_.emplace(cell.t, comms_.trial_used_counts(flights)).first;
  }
  return comms_.admissible_with_used(geom_.cell_center_m(cell.x, cell.y),
                                     it->second);
}

}  // namespace srts
