// Baseline maze router: breadth-first flooding over the temporal-spatial
// grid followed by a traceback that prefers straight continuation.
//
// Flooding treats waits as unit-cost moves, so a cell's label equals
// t - t_s and each (x, y, t) state is labeled at most once. The flood stops
// at the first destination pop; traceback walks labels back to the source,
// trying the previous displacement first and otherwise the fixed priority
// East, West, North, South, Wait.
#pragma once

#include <cstdint>
#include <optional>

#include "srts/airspace.hpp"

namespace srts {

struct FloodResult {
  TSCell source;
  std::pair<int, int> dest_xy{0, 0};
  TimeStep deadline = 0;
  // First destination state popped, if the flood reached one.
  std::optional<TSCell> dest_cell;
  // States dequeued before the flood stopped.
  std::int64_t expanded = 0;

  bool visited(const TSCell& cell) const;
  // Flood label: distance from the source in steps. The cell must have been
  // labeled by the flood.
  int dist(const TSCell& cell) const;

  int width = 0;
  int height = 0;
  // One bitset per time layer, layer index = t - source.t.
  std::vector<std::vector<std::uint64_t>> layers;
};

FloodResult flood_bfs(const AirspaceEnv& env, const TSCell& source,
                      std::pair<int, int> dest_xy, TimeStep deadline);

// Walks the flood labels from dest_cell back to the source. dest_cell must
// be labeled.
Trajectory traceback(const FloodResult& flood, const TSCell& dest_cell);

struct RouteResult {
  std::optional<Trajectory> trajectory;
  // Dequeued search states (flood pops / open-list pops).
  std::int64_t expanded_nodes = 0;
};

// Floods, tracebacks and reserves the resulting trajectory into env.
// Returns no trajectory when the destination is unreachable by the deadline.
RouteResult route_bfs(AirspaceEnv& env, const TSCell& source,
                      std::pair<int, int> dest_xy, TimeStep deadline);

}  // namespace srts
