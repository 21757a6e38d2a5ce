#include "srts/router_srts.hpp"

#include <algorithm>
#include <unordered_map>

namespace srts {

namespace {

// Binary min-heap on cost alone. Hand-rolled so pop order is a fixed
// function of the push/pop sequence on every platform; ties resolve by heap
// shape, not by insertion bookkeeping.
class OpenHeap {
 public:
  void push(double cost, std::int32_t idx) {
    heap_.emplace_back(cost, idx);
    std::size_t i = heap_.size() - 1;
    while (i > 0) {
      const std::size_t up = (i - 1) / 2;
      if (heap_[up].first <= heap_[i].first) break;
      std::swap(heap_[up], heap_[i]);
      i = up;
    }
  }

  std::pair<double, std::int32_t> pop() {
    const auto top = heap_.front();
    heap_.front() = heap_.back();
    heap_.pop_back();
    std::size_t i = 0;
    while (true) {
      const std::size_t l = 2 * i + 1, r = 2 * i + 2;
      std::size_t smallest = i;
      if (l < heap_.size() && heap_[l].first < heap_[smallest].first)
        smallest = l;
      if (r < heap_.size() && heap_[r].first < heap_[smallest].first)
        smallest = r;
      if (smallest == i) break;
      std::swap(heap_[i], heap_[smallest]);
      i = smallest;
    }
    return top;
  }

  bool empty() const { return heap_.empty(); }

 private:
  std::vector<std::pair<double, std::int32_t>> heap_;
};

void check_route_inputs(const AirspaceEnv& env, const TSCell& source,
                        std::pair<int, int> dest_xy) {
  const GridGeometry& geom = env.geometry();
  if (!geom.in_bounds(source.x, source.y) || source.t < 0)
    throw InputError("route source out of bounds");
  if (env.occupancy(source) != 0) throw InputError("route source is blocked");
  if (!geom.in_bounds(dest_xy.first, dest_xy.second))
    throw InputError("route destination out of bounds");
  if (env.static_blocked(dest_xy.first, dest_xy.second))
    throw InputError("route destination is statically blocked");
}

}  // namespace

double default_turn_penalty(const GridGeometry& geom) {
  return 1.0 / (2.0 * (geom.width_cells + geom.height_cells));
}

std::vector<TSCell> candidate_selection(const AirspaceEnv& env,
                                        const SignalBelief* belief,
                                        const SearchNode& node,
                                        const ClosedSet& closed,
                                        const RoutingConfig& cfg) {
  const GridGeometry& geom = env.geometry();
  std::vector<TSCell> out;
  out.reserve(5);
  for (Direction d : kMoveOrder) {
    if (d == Direction::Wait && !cfg.allow_wait) continue;
    const TSCell next{node.cell.x + dir_dx(d), node.cell.y + dir_dy(d),
                      node.cell.t + 1};
    if (!geom.in_bounds(next.x, next.y)) continue;
    if (env.occupancy(next) != 0) continue;
    if (cfg.connectivity_check && belief && !belief->admissible(next))
      continue;
    const Direction heading = d == Direction::Wait ? node.incoming : d;
    if (closed.contains(next, heading)) continue;
    out.push_back(next);
  }
  return out;
}

RouteResult route_srts(AirspaceEnv& env, const SignalBelief* belief,
                       const TSCell& source, std::pair<int, int> dest_xy,
                       const RoutingConfig& cfg) {
  check_route_inputs(env, source, dest_xy);
  if (cfg.connectivity_check && !belief)
    throw InputError("connectivity check requires a signal belief");
  if (cfg.turn_penalty_weight < 0.0)
    throw InputError("turn penalty must be non-negative");

  RouteResult result;
  // An unreachable source link means the mission cannot launch at all.
  if (cfg.connectivity_check && !belief->admissible(source)) return result;

  const TimeStep deadline =
      cfg.deadline.deadline_for(source, dest_xy.first, dest_xy.second);
  env.instant_refresh(source.t);

  std::vector<SearchNode> arena;
  OpenHeap open;
  ClosedSet closed;
  // Best known g + turn_cost per state; only strict improvements reopen.
  std::unordered_map<std::uint64_t, std::pair<double, std::int32_t>> best;

  auto h = [&](const TSCell& c) {
    return static_cast<double>(
        manhattan(c.x, c.y, dest_xy.first, dest_xy.second));
  };

  arena.push_back(SearchNode{source, 0.0, h(source), 0.0, Direction::None, -1});
  best[ClosedSet::pack(source, Direction::None)] = {0.0, 0};
  open.push(arena[0].overall_cost(), 0);

  while (!open.empty()) {
    const auto [cost, idx] = open.pop();
    const SearchNode node = arena[idx];
    const std::uint64_t key = ClosedSet::pack(node.cell, node.incoming);
    if (closed.contains(node.cell, node.incoming)) continue;
    auto bi = best.find(key);
    if (bi == best.end() || bi->second.second != idx) continue;  // superseded

    env.instant_refresh(source.t);
    ++result.expanded_nodes;

    if (node.cell.x == dest_xy.first && node.cell.y == dest_xy.second) {
      Trajectory traj;
      for (std::int32_t i = idx; i >= 0; i = arena[i].parent)
        traj.cells.push_back(arena[i].cell);
      std::reverse(traj.cells.begin(), traj.cells.end());
      env.reserve_trajectory(traj);
      result.trajectory = std::move(traj);
      return result;
    }
    closed.insert(node.cell, node.incoming);

    if (node.cell.t + 1 > deadline) continue;
    for (const TSCell& next : candidate_selection(env, belief, node, closed,
                                                  cfg)) {
      const Direction move = move_direction(node.cell, next);
      const Direction heading =
          move == Direction::Wait ? node.incoming : move;
      const bool turned = move != Direction::Wait &&
                          is_heading(node.incoming) && move != node.incoming;
      SearchNode child;
      child.cell = next;
      child.movement_cost = node.movement_cost + 1.0;
      child.destination_cost = h(next);
      child.turn_cost =
          node.turn_cost + (turned ? cfg.turn_penalty_weight : 0.0);
      child.incoming = heading;
      child.parent = idx;

      const std::uint64_t child_key = ClosedSet::pack(next, heading);
      const double child_cost = child.movement_cost + child.turn_cost;
      auto found = best.find(child_key);
      if (found != best.end() && found->second.first <= child_cost) continue;
      const std::int32_t child_idx = static_cast<std::int32_t>(arena.size());
      arena.push_back(child);
      best[child_key] = {child_cost, child_idx};
      open.push(child.overall_cost(), child_idx);
    }
  }
  return result;
}

}  // namespace srts
