// Sparse-represented temporal-spatial router.
//
// A* over (x, y, t, incoming heading) states. Costs: movement (1 per step,
// waits included), destination (Manhattan distance to the goal) and an
// accumulated turn penalty (turn_penalty_weight per heading change). Waits
// preserve the heading. Keying the search on the heading as well as the
// cell keeps the turn penalty additive; collapsing headings into one state
// can close a cell through a turn-heavy parent and block the turn-minimal
// path through an equal-arrival sibling.
//
// The open list is a plain binary min-heap ordered by overall cost only.
// Equal-cost pops follow the heap's deterministic internal order; candidate
// generation keeps the fixed priority East, West, North, South, Wait.
//
// Each pop calls env.instant_refresh(source.t), so stale reservations are
// dropped the moment routing starts and never influence the search.
#pragma once

#include <cstdint>
#include <unordered_set>

#include "srts/airspace.hpp"
#include "srts/comms.hpp"
#include "srts/router_bfs.hpp"

namespace srts {

struct RoutingConfig {
  // Weight of one heading change; 0 disables turn minimization. Keep below
  // 1 / (deadline - t_s) to leave arrival times optimal.
  double turn_penalty_weight = 0.0;
  bool connectivity_check = false;
  bool allow_wait = true;
  DeadlinePolicy deadline;
};

// Largest weight that can never trade one extra step for fewer turns on the
// default deadline: 1 / (2 (width + height)).
double default_turn_penalty(const GridGeometry& geom);

struct SearchNode {
  TSCell cell;
  double movement_cost = 0.0;     // g: steps from the source
  double destination_cost = 0.0;  // h: Manhattan distance to the goal
  double turn_cost = 0.0;         // accumulated turn penalty
  Direction incoming = Direction::None;
  std::int32_t parent = -1;  // arena index

  double overall_cost() const {
    return movement_cost + destination_cost + turn_cost;
  }
};

// Closed set keyed on (x, y, t, incoming heading).
class ClosedSet {
 public:
  bool contains(const TSCell& cell, Direction incoming) const {
    return keys_.count(pack(cell, incoming)) != 0;
  }
  void insert(const TSCell& cell, Direction incoming) {
    keys_.insert(pack(cell, incoming));
  }
  std::size_t size() const { return keys_.size(); }

  static std::uint64_t pack(const TSCell& cell, Direction incoming) {
    return (static_cast<std::uint64_t>(cell.t) << 35) |
           (static_cast<std::uint64_t>(cell.y) << 19) |
           (static_cast<std::uint64_t>(cell.x) << 3) |
           static_cast<std::uint64_t>(incoming);
  }

 private:
  std::unordered_set<std::uint64_t> keys_;
};

// Filters the one-step successors of `node` in generation order: in bounds,
// not statically blocked, not reserved at t+1, passing the signal check when
// enabled, and not closed under the successor's heading. `belief` may be
// null when the connectivity check is off.
std::vector<TSCell> candidate_selection(const AirspaceEnv& env,
                                        const SignalBelief* belief,
                                        const SearchNode& node,
                                        const ClosedSet& closed,
                                        const RoutingConfig& cfg);

// Routes, reserves the result into env and reports expanded (popped) search
// states. Returns no trajectory when the deadline exhausts the search or
// when the connectivity check rejects the source cell.
RouteResult route_srts(AirspaceEnv& env, const SignalBelief* belief,
                       const TSCell& source, std::pair<int, int> dest_xy,
                       const RoutingConfig& cfg);

}  // namespace srts
