// Reactive baseline: continuous-space potential field steering with no
// reservations and no connectivity guarantees. Attraction pulls straight at
// the destination; repulsion pushes away from craft and obstacle surfaces
// inside the sensing radius with inverse-square falloff and a small
// clockwise bias that breaks head-on symmetry deterministically.
#pragma once

#include <span>

#include "srts/types.hpp"

namespace srts {

struct PotentialFieldConfig {
  double attract_gain = 1.0;
  // Repulsion magnitude at distance d is repulse_gain / d^2 (m/s).
  double repulse_gain = 200.0;
  double sensing_radius_m = 54.0;
  double max_speed_mps = 18.0;
  // Fraction of the repulsion deflected clockwise.
  double clockwise_bias = 0.1;
  // Sources closer than this are treated as being at this distance.
  double min_distance_m = 0.5;
};

struct ObstacleRect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;  // meters, closed rect

  Vec2 closest_point(const Vec2& p) const {
    return {std::min(std::max(p.x, x0), x1), std::min(std::max(p.y, y0), y1)};
  }
};

// One control step: returns the next position. Neighbors are other craft
// positions; obstacles contribute repulsion from their closest surface
// point. Snaps to the destination once it is within one step's reach.
Vec2 reactive_step(const Vec2& pos, const Vec2& dest,
                   std::span<const Vec2> neighbors,
                   std::span<const ObstacleRect> obstacles,
                   const PotentialFieldConfig& cfg, double step_seconds);

}  // namespace srts
