#include "physnav/semnav/program.hpp"

#include <cmath>

#include "physnav/core/errors.hpp"
#include "physnav/core/text.hpp"

namespace physnav {

namespace {

double parse_number(std::string_view s) {
  double v = 0.0;
  if (!parse_double(s, v)) throw ParseError("bad number in subgoal: " + std::string(trim(s)));
  return v;
}

}  // namespace

std::string to_string(const Subgoal& g) {
  switch (g.kind) {
    case SubgoalKind::MoveToObject: return "move_to_object(" + g.first + ")";
    case SubgoalKind::MoveInBetween: return "move_in_between(" + g.first + ", " + g.second + ")";
    case SubgoalKind::MoveToRoom: return "move_to_room(" + g.first + ")";
    case SubgoalKind::MoveForward: return "move_forward(" + format_double(g.value) + ")";
    case SubgoalKind::Turn: return "turn(" + format_double(g.value) + ")";
    case SubgoalKind::Stop: return "stop()";
  }
  return "stop()";
}

Subgoal parse_subgoal(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw ParseError("subgoal must look like name(args): " + std::string(text));
  }
  const std::string_view name = trim(text.substr(0, open));
  const std::string_view args = trim(text.substr(open + 1, text.size() - open - 2));

  if (name == "stop") {
    if (!args.empty()) throw ParseError("stop() takes no arguments");
    return Subgoal::stop();
  }
  if (args.empty()) throw ParseError("missing argument in " + std::string(text));
  if (name == "move_to_object") return Subgoal::move_to_object(std::string(args));
  if (name == "move_to_room") return Subgoal::move_to_room(std::string(args));
  if (name == "move_forward") return Subgoal::move_forward(parse_number(args));
  if (name == "turn") return Subgoal::turn(parse_number(args));
  if (name == "move_in_between") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw ParseError("move_in_between needs two labels");
    const std::string_view a = trim(args.substr(0, comma));
    const std::string_view b = trim(args.substr(comma + 1));
    if (a.empty() || b.empty()) throw ParseError("move_in_between needs two labels");
    return Subgoal::move_in_between(std::string(a), std::string(b));
  }
  throw ParseError("unknown subgoal: " + std::string(name));
}

void validate_program(const SubgoalProgram& program) {
  if (program.empty()) throw ValidationError("empty subgoal program");
  for (std::size_t i = 0; i < program.size(); ++i) {
    const Subgoal& g = program[i];
    const bool last = i + 1 == program.size();
    if ((g.kind == SubgoalKind::Stop) != last) throw ValidationError("program must end with exactly one stop()");
    switch (g.kind) {
      case SubgoalKind::MoveToObject:
      case SubgoalKind::MoveToRoom:
        if (g.first.empty()) throw ValidationError("subgoal without a name");
        break;
      case SubgoalKind::MoveInBetween:
        if (g.first.empty() || g.second.empty()) throw ValidationError("move_in_between needs two labels");
        break;
      case SubgoalKind::MoveForward:
        if (!(g.value > 0.0)) throw ValidationError("move_forward distance must be > 0");
        break;
      case SubgoalKind::Turn:
        if (!std::isfinite(g.value)) throw ValidationError("turn angle must be finite");
        break;
      case SubgoalKind::Stop:
        break;
    }
  }
}

}  // namespace physnav
