#include "srts/reactive.hpp"

#include <cmath>

namespace srts {

namespace {

Vec2 repulsion_from(const Vec2& pos, const Vec2& source,
                    const PotentialFieldConfig& cfg) {
  Vec2 away = pos - source;
  double d = away.norm();
  if (d >= cfg.sensing_radius_m) return {0.0, 0.0};
  Vec2 dir;
  if (d < 1e-9) {
    // Coincident source: push East so the result stays deterministic.
    dir = {1.0, 0.0};
  } else {
    dir = away * (1.0 / d);
  }
  d = std::max(d, cfg.min_distance_m);
  // Clockwise bias: mix in the perpendicular so symmetric encounters shear
  // apart instead of stalling.
  Vec2 biased{dir.x + cfg.clockwise_bias * dir.y,
              dir.y - cfg.clockwise_bias * dir.x};
  const double norm = biased.norm();
  if (norm > 0.0) biased = biased * (1.0 / norm);
  return biased * (cfg.repulse_gain / (d * d));
}

}  // namespace

Vec2 reactive_step(const Vec2& pos, const Vec2& dest,
                   std::span<const Vec2> neighbors,
                   std::span<const ObstacleRect> obstacles,
                   const PotentialFieldConfig& cfg, double step_seconds) {
  if (step_seconds <= 0.0) throw InputError("step duration must be positive");
  if (cfg.max_speed_mps <= 0.0) throw InputError("max speed must be positive");

  Vec2 velocity{0.0, 0.0};
  const Vec2 to_dest = dest - pos;
  const double dist = to_dest.norm();
  if (dist > 0.0)
    velocity = to_dest * (cfg.attract_gain * cfg.max_speed_mps / dist);

  for (const Vec2& n : neighbors) velocity = velocity + repulsion_from(pos, n, cfg);
  for (const ObstacleRect& r : obstacles)
    velocity = velocity + repulsion_from(pos, r.closest_point(pos), cfg);

  const double speed = velocity.norm();
  if (speed > cfg.max_speed_mps)
    velocity = velocity * (cfg.max_speed_mps / speed);

  // Within one step of the goal and no stronger push elsewhere: land.
  const double reach = std::max(velocity.norm(), cfg.max_speed_mps) *
                       step_seconds;
  if (dist <= reach) return dest;
  return pos + velocity * step_seconds;
}

}  // namespace srts
