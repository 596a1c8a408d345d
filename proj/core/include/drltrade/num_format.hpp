#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace drltrade {

// Shortest decimal form that parses back to the exact same double.
inline std::string format_exact(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

// 10 significant digits, the precision used by all report CSV/JSON files.
inline std::string format_sig10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace drltrade
