#include "srts/energy.hpp"

#include <cmath>

namespace srts {

namespace {
constexpr double kPi = 3.14159265358979323846;
// Straight meters one standard maneuver is worth for the base class; other
// classes scale linearly from it.
constexpr double kBaseEquivalentM = 90.0;

int arc_step_count(double arc_speed, double radius_m, double step_seconds) {
  const double arc_len = 0.5 * kPi * radius_m;
  const long n = std::lround(arc_len / (arc_speed * step_seconds));
  return static_cast<int>(std::max(n, 1l));
}
}  // namespace

double sum_abs_acceleration(const VelocityProfile& profile) {
  double total = 0.0;
  for (std::size_t i = 1; i < profile.size(); ++i)
    total += acceleration(profile[i], profile[i - 1]).norm();
  return total;
}

VelocityProfile turn_maneuver_profile(double cruise_mps,
                                      const TurnKinematics& kin,
                                      double step_seconds) {
  if (cruise_mps <= 0.0 || step_seconds <= 0.0 || kin.radius_m <= 0.0)
    throw InputError("turn maneuver parameters must be positive");
  const double arc_speed = cruise_mps / std::sqrt(2.0);
  const int n_arc = arc_step_count(arc_speed, kin.radius_m, step_seconds);

  VelocityProfile profile;
  profile.push_back({cruise_mps, 0.0});
  // Quarter arc: headings 0..90 degrees in equal increments at arc speed.
  for (int k = 1; k <= n_arc; ++k) {
    const double theta = (0.5 * kPi) * k / n_arc;
    profile.push_back({arc_speed * std::cos(theta),
                       arc_speed * std::sin(theta)});
  }
  profile.push_back({0.0, cruise_mps});
  // Entry deceleration happens between samples 0 and 1 because the first
  // arc sample is already at arc speed; insert the slowdown explicitly so
  // the deceleration and the first heading change are separate steps.
  profile.insert(profile.begin() + 1, {arc_speed, 0.0});
  return profile;
}

double turn_maneuver_sum_abs_acc(double cruise_mps, const TurnKinematics& kin,
                                 double step_seconds) {
  const double arc_speed = cruise_mps / std::sqrt(2.0);
  const int n_arc = arc_step_count(arc_speed, kin.radius_m, step_seconds);
  return 2.0 * (cruise_mps - arc_speed) +
         2.0 * n_arc * arc_speed * std::sin(kPi / (4.0 * n_arc));
}

VelocityProfile profile_from_trajectory(const Trajectory& traj,
                                        const GridGeometry& geom,
                                        bool include_launch_transients) {
  validate_trajectory(traj, geom);
  VelocityProfile profile;
  profile.reserve(traj.steps() + (include_launch_transients ? 2 : 0));
  if (include_launch_transients) profile.push_back({0.0, 0.0});
  for (std::size_t i = 1; i < traj.cells.size(); ++i) {
    const Vec2 from = geom.cell_center_m(traj.cells[i - 1].x,
                                         traj.cells[i - 1].y);
    const Vec2 to = geom.cell_center_m(traj.cells[i].x, traj.cells[i].y);
    profile.push_back((to - from) * (1.0 / geom.step_seconds));
  }
  if (include_launch_transients) profile.push_back({0.0, 0.0});
  return profile;
}

double control_thrust(const Trajectory& traj, const VelocityProfile& profile,
                      const ThrustParams& params, const GridGeometry& geom) {
  const std::size_t steps = traj.steps();
  if (profile.size() != steps && profile.size() != steps + 2)
    throw InputError("velocity profile does not match the trajectory");
  if (params.alpha < 0.0 || params.beta < 0.0)
    throw InputError("thrust coefficients must be non-negative");
  return params.alpha * path_length_m(traj, geom) +
         params.beta * sum_abs_acceleration(profile);
}

double energy_per_second(const Trajectory& traj,
                         const VelocityProfile& profile,
                         const ThrustParams& params, const GridGeometry& geom) {
  const double duration = static_cast<double>(traj.steps()) *
                          geom.step_seconds;
  if (duration <= 0.0)
    throw InputError("energy rate needs a trajectory with at least one step");
  return control_thrust(traj, profile, params, geom) / duration;
}

double calibrate_beta_alpha(double turn_equivalent_straight_m,
                            double cruise_mps, const TurnKinematics& kin,
                            double step_seconds) {
  if (turn_equivalent_straight_m <= 0.0)
    throw InputError("turn-equivalent distance must be positive");
  const double maneuver_acc =
      sum_abs_acceleration(turn_maneuver_profile(cruise_mps, kin,
                                                 step_seconds));
  // (L / base) * (base / acc) keeps class ratios exact in floating point.
  return (turn_equivalent_straight_m / kBaseEquivalentM) *
         (kBaseEquivalentM / maneuver_acc);
}

}  // namespace srts
