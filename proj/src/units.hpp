#pragma once

#include <string>
#include <string_view>

namespace demag::units {

/// Physical dimension of a configuration quantity. Each has one canonical
/// SI unit used when rendering.
enum class Dimension {
  temperature,      // K
  field,            // T
  time,             // s
  angular_rate,     // rad/s (Hz is converted with 2 pi)
  rate,             // 1/s
  length,           // m
  mass,             // kg
  three_body_rate,  // m^6/s
};

std::string_view canonical_unit(Dimension d);

/// Parses "<number> <unit>". Throws std::invalid_argument with a short
/// reason when the unit is missing, unknown or of the wrong dimension.
double parse(std::string_view text, Dimension d);

/// A bare number with nothing after it.
double parse_number(std::string_view text);

/// Shortest decimal that reads back to the same double.
std::string format_number(double value);

/// "<shortest number> <canonical unit>"; parse(render(x)) == x exactly.
std::string render(double value, Dimension d);

/// Every unit spelling accepted for a dimension, for help text.
std::string accepted_units(Dimension d);

}  // namespace demag::units
