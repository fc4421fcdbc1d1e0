#include "units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "constants.hpp"

namespace demag::units {

namespace {

struct UnitDef {
  std::string_view name;
  Dimension dim;
  double scale;  // SI value of one unit
};

constexpr double two_pi = 2.0 * constants::pi;

constexpr std::array kUnits{
    UnitDef{"K", Dimension::temperature, 1.0},
    UnitDef{"mK", Dimension::temperature, 1e-3},
    UnitDef{"uK", Dimension::temperature, 1e-6},
    UnitDef{"nK", Dimension::temperature, 1e-9},
    UnitDef{"T", Dimension::field, 1.0},
    UnitDef{"G", Dimension::field, 1e-4},
    UnitDef{"mG", Dimension::field, 1e-7},
    UnitDef{"uG", Dimension::field, 1e-10},
    UnitDef{"s", Dimension::time, 1.0},
    UnitDef{"ms", Dimension::time, 1e-3},
    UnitDef{"us", Dimension::time, 1e-6},
    UnitDef{"rad/s", Dimension::angular_rate, 1.0},
    UnitDef{"Hz", Dimension::angular_rate, two_pi},
    UnitDef{"kHz", Dimension::angular_rate, two_pi * 1e3},
    UnitDef{"1/s", Dimension::rate, 1.0},
    UnitDef{"s^-1", Dimension::rate, 1.0},
    UnitDef{"m", Dimension::length, 1.0},
    UnitDef{"um", Dimension::length, 1e-6},
    UnitDef{"nm", Dimension::length, 1e-9},
    UnitDef{"kg", Dimension::mass, 1.0},
    UnitDef{"u", Dimension::mass, constants::atomic_mass_unit},
    UnitDef{"m^6/s", Dimension::three_body_rate, 1.0},
    UnitDef{"cm^6/s", Dimension::three_body_rate, 1e-12},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view canonical_unit(Dimension d) {
  for (const auto& u : kUnits)
    if (u.dim == d && u.scale == 1.0) return u.name;
  return "";
}

double parse(std::string_view text, Dimension d) {
  text = trim(text);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{}) throw std::invalid_argument("expected '<number> <unit>'");
  const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
  if (unit.empty())
    throw std::invalid_argument("missing unit (expected one of " + accepted_units(d) + ")");
  if (ptr == last || (*ptr != ' ' && *ptr != '\t'))
    throw std::invalid_argument("number and unit must be separated by a space");
  for (const auto& u : kUnits) {
    if (u.name != unit) continue;
    if (u.dim != d)
      throw std::invalid_argument("unit '" + std::string(unit) + "' has the wrong dimension (expected one of " +
                                  accepted_units(d) + ")");
    return u.scale == 1.0 ? value : value * u.scale;
  }
  throw std::invalid_argument("unknown unit '" + std::string(unit) + "' (expected one of " +
                              accepted_units(d) + ")");
}

double parse_number(std::string_view text) {
  text = trim(text);
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) throw std::invalid_argument("expected a number");
  return value;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string render(double value, Dimension d) {
  return format_number(value) + " " + std::string(canonical_unit(d));
}

std::string accepted_units(Dimension d) {
  std::string out;
  for (const auto& u : kUnits) {
    if (u.dim != d) continue;
    if (!out.empty()) out += ", ";
    out += u.name;
  }
  return out;
}

}  // namespace demag::units
