#pragma once

#include <string>

namespace teethseg {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Fixed-point text with `decimals` digits after the point (leaderboard rows).
std::string format_fixed(double value, int decimals);

}  // namespace teethseg
