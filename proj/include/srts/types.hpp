// Core domain types shared by every module: grid geometry, temporal-spatial
// cells, trajectories and the Manhattan move set.
//
// Coordinate conventions: x grows East, y grows North, row y=0 is the first
// row of any text/CSV export. Time t is a non-negative step index; one step
// traverses exactly one grid cell at cruise speed.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "srts/errors.hpp"

namespace srts {

using TimeStep = std::int32_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

enum class Direction : std::uint8_t { East, West, North, South, Wait, None };

// Fixed move priority used by both routers when generating neighbors.
inline constexpr std::array<Direction, 5> kMoveOrder = {
    Direction::East, Direction::West, Direction::North, Direction::South,
    Direction::Wait};

inline int dir_dx(Direction d) {
  switch (d) {
    case Direction::East: return 1;
    case Direction::West: return -1;
    default: return 0;
  }
}

inline int dir_dy(Direction d) {
  switch (d) {
    case Direction::North: return 1;
    case Direction::South: return -1;
    default: return 0;
  }
}

inline bool is_heading(Direction d) {
  return d == Direction::East || d == Direction::West ||
         d == Direction::North || d == Direction::South;
}

const char* direction_name(Direction d);

// Grid cell size (W, W, delta): one cell side per time step at cruise speed.
struct GridGeometry {
  int width_cells = 0;
  int height_cells = 0;
  double cell_size_m = 18.0;
  double step_seconds = 1.0;
  double cruise_speed_mps = 18.0;

  static GridGeometry make(int width, int height, double cell_size_m,
                           double cruise_speed_mps);

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_cells && y >= 0 && y < height_cells;
  }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(width_cells) * height_cells;
  }
  Vec2 cell_center_m(int x, int y) const {
    return {(x + 0.5) * cell_size_m, (y + 0.5) * cell_size_m};
  }
  void validate() const;
};

struct TSCell {
  int x = 0;
  int y = 0;
  TimeStep t = 0;

  bool operator==(const TSCell& o) const {
    return x == o.x && y == o.y && t == o.t;
  }
  bool operator!=(const TSCell& o) const { return !(*this == o); }
  bool same_xy(const TSCell& o) const { return x == o.x && y == o.y; }
};

inline int manhattan(int x0, int y0, int x1, int y1) {
  return std::abs(x0 - x1) + std::abs(y0 - y1);
}
inline int manhattan(const TSCell& a, const TSCell& b) {
  return manhattan(a.x, a.y, b.x, b.y);
}

// Time-monotone path through the maze. t increases by exactly 1 per entry;
// consecutive cells either share (x, y) (a wait) or differ by one grid step
// in exactly one axis.
struct Trajectory {
  std::vector<TSCell> cells;

  const TSCell& source() const { return cells.front(); }
  std::pair<int, int> destination_xy() const {
    return {cells.back().x, cells.back().y};
  }
  TimeStep arrival_time() const { return cells.back().t; }
  // Number of step intervals (cells - 1).
  std::size_t steps() const { return cells.empty() ? 0 : cells.size() - 1; }
};

// Throws InputError when the trajectory breaks a structural invariant.
void validate_trajectory(const Trajectory& traj, const GridGeometry& geom);

// Direction of the move from `a` to `b` (must be adjacent-or-equal cells).
Direction move_direction(const TSCell& a, const TSCell& b);

// Heading changes between consecutive non-wait moves. Waits preserve the
// current heading; the first move establishes it without penalty.
int count_turns(const Trajectory& traj);

// Meters covered, i.e. non-wait moves times the cell size.
double path_length_m(const Trajectory& traj, const GridGeometry& geom);

// Deadline policy: t_s + manhattan_factor * manhattan + slack_steps.
struct DeadlinePolicy {
  int manhattan_factor = 4;
  int slack_steps = 64;

  TimeStep deadline_for(const TSCell& source, int dest_x, int dest_y) const {
    return source.t +
           manhattan_factor * manhattan(source.x, source.y, dest_x, dest_y) +
           slack_steps;
  }
};

}  // namespace srts
