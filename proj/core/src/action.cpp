#include "gridslam/action.hpp"

#include <string>

#include "gridslam/error.hpp"

namespace gridslam {

std::string_view action_name(Action action) {
  switch (action) {
    case Action::kForward:
      return "forward";
    case Action::kRotateLeft:
      return "rotate-left";
    case Action::kRotateRight:
      return "rotate-right";
  }
  return "unknown";
}

Action parse_action(std::string_view name) {
  if (name == "forward") return Action::kForward;
  if (name == "left" || name == "rotate-left") return Action::kRotateLeft;
  if (name == "right" || name == "rotate-right") return Action::kRotateRight;
  throw InvalidArgument("unknown action '" + std::string(name) + "'");
}

}  // namespace gridslam
