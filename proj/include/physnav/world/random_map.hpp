#pragma once

#include <array>
#include <cstdint>

#include "physnav/world/grid_map.hpp"

namespace physnav {

struct RoomTemplate {
  const char* room;
  std::array<const char*, 3> objects;
};

/// Room types used by the generator and the objects typical of each.
const std::array<RoomTemplate, 5>& household_rooms();

struct RandomMapConfig {
  int width = 80;
  int height = 60;
  double cell_size = 0.1;
  /// Axis-aligned furniture blocks scattered inside rooms.
  int furniture_count = 8;
  int hole_patches = 2;
  /// Landmark objects (2x2 labeled cells) per room.
  int landmarks_per_room = 2;
};

/// Builds a closed, 4-connected house-like map: the floor is split into
/// rooms by walls with doorways, furnished, given floor holes and labeled
/// landmarks drawn from each room's typical objects. Free cells that end up
/// cut off from the main component are filled in as obstacles.
GridMap make_random_map(std::uint64_t seed, const RandomMapConfig& config = {});

}  // namespace physnav
