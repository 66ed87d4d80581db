#pragma once

#include <cstdint>
#include <string_view>

namespace gridslam {

// Discrete action set. The numeric order is part of the binding contract.
enum class Action : std::uint8_t { kForward = 0, kRotateLeft = 1, kRotateRight = 2 };

inline constexpr int kActionCount = 3;

std::string_view action_name(Action action);
// Accepts "forward", "left"/"rotate-left", "right"/"rotate-right".
Action parse_action(std::string_view name);

}  // namespace gridslam
