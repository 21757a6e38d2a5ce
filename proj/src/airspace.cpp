#include "srts/airspace.hpp"

#include <algorithm>
#include <sstream>

namespace srts {

AirspaceEnv::AirspaceEnv(GridGeometry geom) : geom_(geom) {
  geom_.validate();
  static_map_.assign(geom_.cell_count(), 0);
}

void AirspaceEnv::set_static_blocked(int x, int y, bool blocked) {
  if (!geom_.in_bounds(x, y)) throw BoundsError("static cell out of bounds");
  static_map_[static_cast<std::size_t>(y) * geom_.width_cells + x] =
      blocked ? 1 : 0;
}

bool AirspaceEnv::static_blocked(int x, int y) const {
  if (!geom_.in_bounds(x, y)) throw BoundsError("static cell out of bounds");
  return static_map_[static_cast<std::size_t>(y) * geom_.width_cells + x] != 0;
}

void AirspaceEnv::add_no_fly_rect(int x0, int y0, int x1, int y1) {
  if (x0 > x1 || y0 > y1) throw InputError("no-fly rect corners are swapped");
  if (!geom_.in_bounds(x0, y0) || !geom_.in_bounds(x1, y1))
    throw BoundsError("no-fly rect out of bounds");
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      static_map_[static_cast<std::size_t>(y) * geom_.width_cells + x] = 1;
}

bool AirspaceEnv::dynamic_blocked(int x, int y, TimeStep t) const {
  auto it = dynamic_.find(t);
  return it != dynamic_.end() && it->second.count(pack_xy(x, y)) != 0;
}

int AirspaceEnv::occupancy(const TSCell& cell) const {
  if (!geom_.in_bounds(cell.x, cell.y))
    throw BoundsError("occupancy query out of bounds");
  if (cell.t < 0) throw BoundsError("occupancy query before t = 0");
  if (static_map_[static_cast<std::size_t>(cell.y) * geom_.width_cells +
                  cell.x] != 0)
    return -1;
  return dynamic_blocked(cell.x, cell.y, cell.t) ? -1 : 0;
}

void AirspaceEnv::reserve_trajectory(const Trajectory& traj) {
  validate_trajectory(traj, geom_);
  // Validate everything before touching the store so a conflict cannot
  // leave a partial reservation behind.
  for (const TSCell& c : traj.cells)
    if (occupancy(c) != 0)
      throw ReservationConflict("temporal-spatial cell already blocked");
  for (const TSCell& c : traj.cells) {
    dynamic_[c.t].insert(pack_xy(c.x, c.y));
    ++live_entries_;
  }
}

std::size_t AirspaceEnv::instant_refresh(TimeStep now) {
  if (now < current_time_)
    throw TimeRegression("instant_refresh cannot move time backwards");
  current_time_ = now;
  std::size_t removed = 0;
  auto end = dynamic_.lower_bound(now);
  for (auto it = dynamic_.begin(); it != end; ++it) removed += it->second.size();
  dynamic_.erase(dynamic_.begin(), end);
  live_entries_ -= removed;
  return removed;
}

TimeStep AirspaceEnv::horizon() const {
  return dynamic_.empty() ? current_time_ : dynamic_.rbegin()->first;
}

std::string AirspaceEnv::static_map_text() const {
  std::string out;
  out.reserve(geom_.cell_count() + geom_.height_cells);
  for (int y = 0; y < geom_.height_cells; ++y) {
    for (int x = 0; x < geom_.width_cells; ++x)
      out += static_map_[static_cast<std::size_t>(y) * geom_.width_cells + x]
                 ? '#'
                 : '.';
    out += '\n';
  }
  return out;
}

void AirspaceEnv::load_static_map_text(const std::string& text) {
  std::vector<std::uint8_t> next(geom_.cell_count(), 0);
  std::istringstream in(text);
  std::string line;
  int y = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.eof()) break;
    if (y >= geom_.height_cells)
      throw InputError("static map has more rows than the grid");
    if (static_cast<int>(line.size()) != geom_.width_cells)
      throw InputError("static map row width mismatch");
    for (int x = 0; x < geom_.width_cells; ++x) {
      if (line[x] == '#')
        next[static_cast<std::size_t>(y) * geom_.width_cells + x] = 1;
      else if (line[x] != '.')
        throw InputError("static map rows must contain only '.' and '#'");
    }
    ++y;
  }
  if (y != geom_.height_cells)
    throw InputError("static map has fewer rows than the grid");
  static_map_ = std::move(next);
}

std::string AirspaceEnv::dynamic_store_dump() const {
  std::vector<TSCell> cells;
  cells.reserve(live_entries_);
  for (const auto& [t, set] : dynamic_)
    for (std::uint32_t packed : set)
      cells.push_back({static_cast<int>(packed & 0xffffu),
                       static_cast<int>(packed >> 16), t});
  std::sort(cells.begin(), cells.end(), [](const TSCell& a, const TSCell& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  std::ostringstream out;
  for (const TSCell& c : cells) out << c.t << ' ' << c.x << ' ' << c.y << '\n';
  return out.str();
}

}  // namespace srts
