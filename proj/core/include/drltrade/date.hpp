#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace drltrade {

// Calendar date (UTC day), ISO-8601 text form YYYY-MM-DD.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  // Days since 1970-01-01 (negative before). Proleptic Gregorian.
  long to_days() const;
  static Date from_days(long days);

  Date plus_days(long n) const { return from_days(to_days() + n); }

  std::string to_string() const;

  // Strict YYYY-MM-DD. Throws Error on anything else.
  static Date parse(std::string_view text);

  static bool is_valid(int y, int m, int d);
};

}  // namespace drltrade
