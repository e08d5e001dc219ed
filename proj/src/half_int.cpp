#include "spinsq/half_int.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "spinsq/errors.hpp"
#include "spinsq/types.hpp"

namespace spinsq {

namespace {

int parse_int(std::string_view s, std::string_view whole) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument("not a half-integer: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

HalfInt HalfInt::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw InvalidArgument("empty half-integer");
  if (s.front() == '+') s.remove_prefix(1);

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const int num = parse_int(s.substr(0, slash), text);
    const int den = parse_int(s.substr(slash + 1), text);
    if (den == 1) return from_int(num);
    if (den == 2) return from_twice(num);
    throw InvalidArgument("not a half-integer: '" + std::string(text) + "'");
  }
  if (s.find('.') != std::string_view::npos) {
    const double v = std::stod(std::string(s));
    const double twice = 2.0 * v;
    if (std::abs(twice - std::round(twice)) > 1e-12) {
      throw InvalidArgument("not a half-integer: '" + std::string(text) + "'");
    }
    return from_twice(static_cast<int>(std::lround(twice)));
  }
  return from_int(parse_int(s, text));
}

std::string HalfInt::to_string() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

Axis parse_axis(std::string_view text) {
  if (text.size() == 1) {
    switch (text.front()) {
      case 'x':
      case 'X':
        return Axis::X;
      case 'y':
      case 'Y':
        return Axis::Y;
      case 'z':
      case 'Z':
        return Axis::Z;
      default:
        break;
    }
  }
  throw InvalidArgument("invalid axis '" + std::string(text) + "'");
}

}  // namespace spinsq
