#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace physnav {

enum class SubgoalKind { MoveToObject, MoveInBetween, MoveToRoom, MoveForward, Turn, Stop };

/// One step of a code-like navigation program. `first` / `second` hold
/// label or room names; `value` holds meters (MoveForward) or degrees
/// (Turn, positive = left).
struct Subgoal {
  SubgoalKind kind = SubgoalKind::Stop;
  std::string first;
  std::string second;
  double value = 0.0;

  static Subgoal move_to_object(std::string label) { return {SubgoalKind::MoveToObject, std::move(label), {}, 0.0}; }
  static Subgoal move_in_between(std::string a, std::string b) {
    return {SubgoalKind::MoveInBetween, std::move(a), std::move(b), 0.0};
  }
  static Subgoal move_to_room(std::string room) { return {SubgoalKind::MoveToRoom, std::move(room), {}, 0.0}; }
  static Subgoal move_forward(double meters) { return {SubgoalKind::MoveForward, {}, {}, meters}; }
  static Subgoal turn(double degrees) { return {SubgoalKind::Turn, {}, {}, degrees}; }
  static Subgoal stop() { return {}; }

  friend bool operator==(const Subgoal&, const Subgoal&) = default;
};

using SubgoalProgram = std::vector<Subgoal>;

/// Code-like rendering, e.g. `move_in_between(sofa, chair)`, `turn(-90)`.
std::string to_string(const Subgoal& subgoal);
/// Inverse of to_string. Throws ParseError.
Subgoal parse_subgoal(std::string_view text);

/// Non-empty, ends with Stop, Stop only at the end, names present where
/// needed, MoveForward distance > 0. Throws ValidationError.
void validate_program(const SubgoalProgram& program);

}  // namespace physnav
