#pragma once

#include <cstddef>
#include <deque>

#include "physnav/core/geometry.hpp"

namespace physnav {

/// Planar pose plus attitude. `fallen` is absorbing: nothing in the library
/// clears it once set.
struct PoseState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  bool fallen = false;
  /// The footprint touched an obstacle on the last control tick; only a new
  /// contact delivers a collision impulse.
  bool in_contact = false;
  int step_index = 0;

  Vec2 position() const { return {x, y}; }
  Pose2 planar() const { return {x, y, heading}; }

  static PoseState at(Pose2 p) {
    PoseState s;
    s.x = p.x;
    s.y = p.y;
    s.heading = normalize_angle(p.heading);
    return s;
  }
};

/// Sliding window over the most recent poses used for stuck detection.
class StuckWindow {
 public:
  static constexpr std::size_t kDefaultCapacity = 50;

  explicit StuckWindow(std::size_t capacity = kDefaultCapacity) : capacity_(capacity) {}

  void push(const Pose2& pose) {
    poses_.push_back(pose);
    if (poses_.size() > capacity_) poses_.pop_front();
  }
  void clear() { poses_.clear(); }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return poses_.size(); }
  bool full() const { return poses_.size() == capacity_; }
  const std::deque<Pose2>& poses() const { return poses_; }

 private:
  std::size_t capacity_;
  std::deque<Pose2> poses_;
};

}  // namespace physnav
