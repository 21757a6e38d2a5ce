#include "srts/types.hpp"

namespace srts {

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::East: return "E";
    case Direction::West: return "W";
    case Direction::North: return "N";
    case Direction::South: return "S";
    case Direction::Wait: return "wait";
    case Direction::None: return "none";
  }
  return "?";
}

GridGeometry GridGeometry::make(int width, int height, double cell_size_m,
                                double cruise_speed_mps) {
  GridGeometry g;
  g.width_cells = width;
  g.height_cells = height;
  g.cell_size_m = cell_size_m;
  g.cruise_speed_mps = cruise_speed_mps;
  if (cruise_speed_mps > 0.0) g.step_seconds = cell_size_m / cruise_speed_mps;
  g.validate();
  return g;
}

void GridGeometry::validate() const {
  if (width_cells <= 0 || height_cells <= 0)
    throw InputError("grid dimensions must be positive");
  if (cell_size_m <= 0.0) throw InputError("cell size must be positive");
  if (cruise_speed_mps <= 0.0)
    throw InputError("cruise speed must be positive");
  if (step_seconds <= 0.0) throw InputError("step duration must be positive");
}

Direction move_direction(const TSCell& a, const TSCell& b) {
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  if (dx == 0 && dy == 0) return Direction::Wait;
  if (dx == 1 && dy == 0) return Direction::East;
  if (dx == -1 && dy == 0) return Direction::West;
  if (dx == 0 && dy == 1) return Direction::North;
  if (dx == 0 && dy == -1) return Direction::South;
  throw InputError("cells are not adjacent");
}

void validate_trajectory(const Trajectory& traj, const GridGeometry& geom) {
  if (traj.cells.empty()) throw InputError("trajectory is empty");
  for (const TSCell& c : traj.cells) {
    if (!geom.in_bounds(c.x, c.y))
      throw InputError("trajectory leaves the grid");
    if (c.t < 0) throw InputError("trajectory has a negative timestep");
  }
  for (std::size_t i = 1; i < traj.cells.size(); ++i) {
    const TSCell& prev = traj.cells[i - 1];
    const TSCell& cur = traj.cells[i];
    if (cur.t != prev.t + 1)
      throw InputError("trajectory timesteps must increase by exactly 1");
    if (manhattan(prev, cur) > 1)
      throw InputError("trajectory moves more than one cell per step");
  }
}

int count_turns(const Trajectory& traj) {
  int turns = 0;
  Direction heading = Direction::None;
  for (std::size_t i = 1; i < traj.cells.size(); ++i) {
    const Direction d = move_direction(traj.cells[i - 1], traj.cells[i]);
    if (d == Direction::Wait) continue;
    if (is_heading(heading) && d != heading) ++turns;
    heading = d;
  }
  return turns;
}

double path_length_m(const Trajectory& traj, const GridGeometry& geom) {
  std::size_t moves = 0;
  for (std::size_t i = 1; i < traj.cells.size(); ++i)
    if (!traj.cells[i].same_xy(traj.cells[i - 1])) ++moves;
  return static_cast<double>(moves) * geom.cell_size_m;
}

}  // namespace srts
