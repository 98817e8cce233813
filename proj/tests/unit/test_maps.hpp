#pragma once

#include <string>

#include "physnav/embodiment/pose_state.hpp"
#include "physnav/world/grid_map.hpp"

namespace physnav::testing {

// Open room of `cols` x `rows` interior cells with a closed border.
inline std::string open_room_text(int cols, int rows, double cell = 0.1) {
  std::string text = "cellsize " + std::to_string(cell) + "\n";
  text += std::string(static_cast<std::size_t>(cols + 2), '#') + "\n";
  for (int r = 0; r < rows; ++r) text += "#" + std::string(static_cast<std::size_t>(cols), '.') + "#\n";
  text += std::string(static_cast<std::size_t>(cols + 2), '#') + "\n";
  return text;
}

inline GridMap open_room(int cols, int rows, double cell = 0.1) {
  return load_map(open_room_text(cols, rows, cell));
}

inline PoseState pose_at(double x, double y, double heading = 0.0) {
  PoseState p;
  p.x = x;
  p.y = y;
  p.heading = heading;
  return p;
}

}  // namespace physnav::testing
