#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace spinsq {

/// Exact half-integer stored as twice its value (j = 3/2 is stored as 3).
class HalfInt {
 public:
  constexpr HalfInt() = default;

  static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
  static constexpr HalfInt from_int(int value) { return HalfInt(2 * value); }

  /// Accepts "3/2", "-1/2", "1", "1.5" or "0.5". Throws InvalidArgument for
  /// anything that is not an exact multiple of 1/2.
  static HalfInt parse(std::string_view text);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  constexpr HalfInt operator-() const { return HalfInt(-twice_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string to_string() const;

 private:
  constexpr explicit HalfInt(int twice) : twice_(twice) {}

  int twice_ = 0;
};

}  // namespace spinsq
