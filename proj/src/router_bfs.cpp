#include "srts/router_bfs.hpp"

#include <algorithm>

namespace srts {

namespace {

void check_route_inputs(const AirspaceEnv& env, const TSCell& source,
                        std::pair<int, int> dest_xy, TimeStep deadline) {
  const GridGeometry& geom = env.geometry();
  if (!geom.in_bounds(source.x, source.y) || source.t < 0)
    throw InputError("route source out of bounds");
  if (env.occupancy(source) != 0) throw InputError("route source is blocked");
  if (!geom.in_bounds(dest_xy.first, dest_xy.second))
    throw InputError("route destination out of bounds");
  if (env.static_blocked(dest_xy.first, dest_xy.second))
    throw InputError("route destination is statically blocked");
  if (deadline < source.t)
    throw InputError("route deadline precedes the start time");
}

}  // namespace

bool FloodResult::visited(const TSCell& cell) const {
  const int layer = cell.t - source.t;
  if (layer < 0 || layer >= static_cast<int>(layers.size())) return false;
  if (cell.x < 0 || cell.x >= width || cell.y < 0 || cell.y >= height)
    return false;
  const std::size_t bit =
      static_cast<std::size_t>(cell.y) * width + cell.x;
  return (layers[layer][bit >> 6] >> (bit & 63)) & 1u;
}

int FloodResult::dist(const TSCell& cell) const {
  if (!visited(cell)) throw InputError("cell was not labeled by the flood");
  return cell.t - source.t;
}

FloodResult flood_bfs(const AirspaceEnv& env, const TSCell& source,
                      std::pair<int, int> dest_xy, TimeStep deadline) {
  const GridGeometry& geom = env.geometry();
  FloodResult flood;
  flood.source = source;
  flood.dest_xy = dest_xy;
  flood.deadline = deadline;
  flood.width = geom.width_cells;
  flood.height = geom.height_cells;

  const std::size_t words = (geom.cell_count() + 63) / 64;
  auto mark = [&](const TSCell& c) {
    const std::size_t layer = static_cast<std::size_t>(c.t - source.t);
    while (flood.layers.size() <= layer)
      flood.layers.emplace_back(words, 0ull);
    const std::size_t bit = static_cast<std::size_t>(c.y) * flood.width + c.x;
    flood.layers[layer][bit >> 6] |= 1ull << (bit & 63);
  };

  std::vector<TSCell> queue;
  queue.push_back(source);
  mark(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const TSCell cur = queue[head];
    ++flood.expanded;
    if (cur.x == dest_xy.first && cur.y == dest_xy.second) {
      flood.dest_cell = cur;
      break;
    }
    if (cur.t + 1 > deadline) continue;
    for (Direction d : kMoveOrder) {
      const TSCell next{cur.x + dir_dx(d), cur.y + dir_dy(d), cur.t + 1};
      if (!geom.in_bounds(next.x, next.y)) continue;
      if (flood.visited(next)) continue;
      if (env.occupancy(next) != 0) continue;
      mark(next);
      queue.push_back(next);
    }
  }
  return flood;
}

Trajectory traceback(const FloodResult& flood, const TSCell& dest_cell) {
  if (!flood.visited(dest_cell))
    throw InputError("traceback target was not labeled by the flood");

  Trajectory traj;
  TSCell cur = dest_cell;
  traj.cells.push_back(cur);
  // Displacement applied by the previous traceback step; preferring it keeps
  // the walk straight through flood plateaus.
  int prev_dx = 0, prev_dy = 0;
  bool have_prev = false;
  while (cur.t > flood.source.t) {
    const std::array<std::pair<int, int>, 5> order = {
        std::pair<int, int>{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0, 0}};
    TSCell chosen;
    bool found = false;
    if (have_prev) {
      const TSCell cand{cur.x + prev_dx, cur.y + prev_dy, cur.t - 1};
      if (flood.visited(cand)) {
        chosen = cand;
        found = true;
      }
    }
    if (!found) {
      for (const auto& [dx, dy] : order) {
        const TSCell cand{cur.x + dx, cur.y + dy, cur.t - 1};
        if (flood.visited(cand)) {
          chosen = cand;
          prev_dx = dx;
          prev_dy = dy;
          have_prev = true;
          found = true;
          break;
        }
      }
    }
    if (!found) throw InputError("flood labels are not traceback-connected");
    traj.cells.push_back(chosen);
    cur = chosen;
  }
  std::reverse(traj.cells.begin(), traj.cells.end());
  return traj;
}

RouteResult route_bfs(AirspaceEnv& env, const TSCell& source,
                      std::pair<int, int> dest_xy, TimeStep deadline) {
  check_route_inputs(env, source, dest_xy, deadline);
  FloodResult flood = flood_bfs(env, source, dest_xy, deadline);
  RouteResult result;
  result.expanded_nodes = flood.expanded;
  if (!flood.dest_cell) return result;
  Trajectory traj = traceback(flood, *flood.dest_cell);
  env.reserve_trajectory(traj);
  result.trajectory = std::move(traj);
  return result;
}

}  // namespace srts
