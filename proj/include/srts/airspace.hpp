// Temporal-spatial airspace environment.
//
// The maze function M(x, y, t) maps every in-bounds cell to -1 (blocked) or
// 0 (free). Static obstacles block a column for all t; dynamic obstacles are
// reserved trajectory cells kept in a sparse per-timestep store. Entries
// whose timestamp has passed are dropped by the instant-refreshing call, so
// the live store only ever describes the future.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>

#include "srts/types.hpp"

namespace srts {

class AirspaceEnv {
 public:
  explicit AirspaceEnv(GridGeometry geom);

  const GridGeometry& geometry() const { return geom_; }

  // Static obstacles -------------------------------------------------------
  void set_static_blocked(int x, int y, bool blocked);
  bool static_blocked(int x, int y) const;  // throws BoundsError
  // Marks the inclusive cell rectangle [x0..x1] x [y0..y1] as blocked.
  void add_no_fly_rect(int x0, int y0, int x1, int y1);

  // Occupancy: -1 when (x, y) is statically blocked or reserved at t,
  // 0 when free. Throws BoundsError outside the grid or for t < 0.
  int occupancy(const TSCell& cell) const;

  // Reserves every cell of the trajectory, source included. Validates the
  // trajectory first and commits atomically: on ReservationConflict the
  // store is unchanged.
  void reserve_trajectory(const Trajectory& traj);

  // Drops every dynamic entry with t < now and advances the current time.
  // Returns the number of removed (t, cell) entries. Throws TimeRegression
  // when now is earlier than the current time.
  std::size_t instant_refresh(TimeStep now);

  // Number of (t, cell) entries currently held. O(1).
  std::size_t live_entry_count() const { return live_entries_; }

  TimeStep current_time() const { return current_time_; }
  // Largest timestep present in the store, or current_time when empty.
  TimeStep horizon() const;

  // Text import/export -----------------------------------------------------
  // One line per row, row y = 0 first; '.' free, '#' statically blocked.
  std::string static_map_text() const;
  // Replaces the static layer. Dimensions must match the geometry.
  void load_static_map_text(const std::string& text);
  // Debug dump of the dynamic store: "t x y" per line, sorted by (t, x, y).
  std::string dynamic_store_dump() const;

 private:
  static std::uint32_t pack_xy(int x, int y) {
    return (static_cast<std::uint32_t>(y) << 16) |
           static_cast<std::uint32_t>(x);
  }

  bool dynamic_blocked(int x, int y, TimeStep t) const;

  GridGeometry geom_;
  std::vector<std::uint8_t> static_map_;
  std::map<TimeStep, std::unordered_set<std::uint32_t>> dynamic_;
  TimeStep current_time_ = 0;
  std::size_t live_entries_ = 0;
};

}  // namespace srts
