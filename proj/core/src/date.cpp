#include "drltrade/date.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "drltrade/errors.hpp"

namespace drltrade {

namespace {

// days_from_civil / civil_from_days, Hinnant's proleptic Gregorian algorithms.
long days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long yy = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

int days_in_month(int y, int m) {
  static constexpr std::array<int, 12> md = {31, 28, 31, 30, 31, 30,
                                             31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return md[static_cast<std::size_t>(m - 1)];
}

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("bad date component '" + std::string(s) + "'");
  return v;
}

}  // namespace

long Date::to_days() const {
  return days_from_civil(year, static_cast<unsigned>(month),
                         static_cast<unsigned>(day));
}

Date Date::from_days(long days) {
  int y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  return Date{y, static_cast<int>(m), static_cast<int>(d)};
}

bool Date::is_valid(int y, int m, int d) {
  return m >= 1 && m <= 12 && d >= 1 && d <= days_in_month(y, m);
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

Date Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw Error("bad date '" + std::string(text) + "', expected YYYY-MM-DD");
  const int y = parse_int(text.substr(0, 4));
  const int m = parse_int(text.substr(5, 2));
  const int d = parse_int(text.substr(8, 2));
  if (!is_valid(y, m, d))
    throw Error("invalid calendar date '" + std::string(text) + "'");
  return Date{y, m, d};
}

}  // namespace drltrade
