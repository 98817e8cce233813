#pragma once

#include <cstdint>

#include "physnav/embodiment/pose_state.hpp"
#include "physnav/embodiment/robot_profile.hpp"

namespace physnav {

/// AR(1) coefficient of the attitude process.
inline constexpr double kAttitudeDecay = 0.9;

/// Stuck thresholds: displacement and heading span over a full window.
inline constexpr double kStuckDisplacement = 0.2;
inline constexpr double kStuckHeadingDeg = 15.0;

/// One attitude update:
///   roll' = 0.9 roll + N(0, sigma (1 + |v|)) + collided * collision_impulse
///           + on_hole * hole_impulse
/// and likewise for pitch. Position and heading are untouched; the caller
/// decides falls with check_fall. Throws AlreadyFallen.
PoseState apply_disturbance(const PoseState& pose, const RobotProfile& profile,
                            double commanded_speed, bool collided, bool on_hole,
                            std::uint64_t rng_seed);

/// |roll| > fall_roll_deg or |pitch| > fall_pitch_deg (strict).
bool check_fall(const PoseState& pose, const RobotProfile& profile);

/// Full window, all pairwise displacements < 0.2 m and total heading span
/// < 15 deg (strict).
bool check_stuck(const StuckWindow& window);

/// Smallest arc (rad) covering every heading in the window.
double heading_span(const StuckWindow& window);
/// Largest pairwise distance between poses in the window.
double max_displacement(const StuckWindow& window);

}  // namespace physnav
