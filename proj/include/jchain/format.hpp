#pragma once

#include <charconv>
#include <string>

namespace jchain {

/// Locale-independent shortest-general formatting with `digits` significant digits.
inline std::string format_double(double v, int digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  std::string s(buf, res.ptr);
  if (s == "-0") s = "0";
  return s;
}

}  // namespace jchain
