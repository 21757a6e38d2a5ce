// Control-thrust model: thrust = alpha * distance + beta * sum |acc|,
// with per-step accelerations taken over a velocity profile sampled once
// per time step. Vehicle classes differ only in beta / alpha, calibrated so
// one standard 90-degree turn maneuver costs as much thrust as a class-
// specific straight distance.
#pragma once

#include <vector>

#include "srts/types.hpp"

namespace srts {

// One velocity sample per step interval: profile[i] is the velocity between
// cells i and i+1 of a trajectory.
using VelocityProfile = std::vector<Vec2>;

struct TurnKinematics {
  double radius_m = 45.0;
};

struct ThrustParams {
  double alpha = 1.0;
  double beta = 0.0;
};

inline Vec2 acceleration(const Vec2& v, const Vec2& v_prev) {
  return v - v_prev;
}

// Sum of |v_i - v_{i-1}| over consecutive profile samples.
double sum_abs_acceleration(const VelocityProfile& profile);

// Velocity samples of the standard 90-degree maneuver: decelerate from
// cruise to cruise / sqrt(2) in one step, fly a quarter arc of the given
// radius at that speed with equal heading increments, accelerate back in
// one step. Starts and ends at cruise speed with headings 90 degrees apart.
VelocityProfile turn_maneuver_profile(double cruise_mps,
                                      const TurnKinematics& kin,
                                      double step_seconds);

// Closed-form sum |acc| of the same maneuver, for cross-checking the
// sampled profile: 2 (v - v') + 2 n v' sin(pi / (4 n)).
double turn_maneuver_sum_abs_acc(double cruise_mps, const TurnKinematics& kin,
                                 double step_seconds);

// Instantaneous velocity profile of a grid trajectory: displacement between
// consecutive cell centers divided by the step duration. Waits produce zero
// velocity samples. When include_launch_transients is set, a zero sample is
// prepended and appended so spin-up and landing count as accelerations.
VelocityProfile profile_from_trajectory(const Trajectory& traj,
                                        const GridGeometry& geom,
                                        bool include_launch_transients = false);

// alpha * path_length + beta * sum |acc|. The profile must have one sample
// per trajectory step (or two extra when transients were included).
double control_thrust(const Trajectory& traj, const VelocityProfile& profile,
                      const ThrustParams& params, const GridGeometry& geom);

// Thrust per second of flight; duration is steps * step_seconds.
double energy_per_second(const Trajectory& traj,
                         const VelocityProfile& profile,
                         const ThrustParams& params, const GridGeometry& geom);

// beta / alpha such that one standard turn maneuver costs the same thrust
// as flying `turn_equivalent_straight_m` meters straight.
double calibrate_beta_alpha(double turn_equivalent_straight_m,
                            double cruise_mps, const TurnKinematics& kin,
                            double step_seconds);

}  // namespace srts
