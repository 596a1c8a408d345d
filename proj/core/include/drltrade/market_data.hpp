#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drltrade/date.hpp"

namespace drltrade {

// One daily bar in the Yahoo Finance export schema.
struct OhlcvBar {
  Date date;
  double open = 0;
  double high = 0;
  double low = 0;
  double close = 0;
  double adj_close = 0;
  double volume = 0;

  bool operator==(const OhlcvBar&) const = default;
};

// Which price column drives returns, features and wealth accounting.
enum class PriceField { adj_close, close };

PriceField price_field_from_string(std::string_view name);
std::string_view to_string(PriceField f);

struct PriceSeries {
  std::string asset_id;
  std::vector<OhlcvBar> bars;

  std::size_t size() const { return bars.size(); }
  double price(std::size_t i, PriceField f) const {
    return f == PriceField::adj_close ? bars[i].adj_close : bars[i].close;
  }
  std::vector<double> prices(PriceField f) const;

  bool operator==(const PriceSeries&) const = default;
};

struct ParseResult {
  PriceSeries series;
  std::size_t rows_dropped = 0;  // rows with "null"/empty price or volume
};

// Parses a Yahoo-schema CSV (header row with the 7 canonical column names in
// any order). Rows are sorted ascending by date; duplicate dates are an
// error, not a dedup.
ParseResult parse_csv(std::string_view text, std::string asset_id = "");

// Canonical column order, ISO dates, shortest exact float form. Parsing the
// output reproduces the input series bit for bit.
std::string serialize_csv(const PriceSeries& series);

struct SplitResult {
  PriceSeries train;
  PriceSeries test;
};

// round(n * train_fraction) bars in front, remainder behind, no shuffling.
std::size_t split_index(std::size_t n, double train_fraction);
SplitResult chronological_split(const PriceSeries& series, double train_fraction = 0.9);

// --- remote fetch (optional; everything works from local files) ---

struct DateRange {
  std::optional<Date> start;
  std::optional<Date> end;
};

// Substitutes {symbol}, {period1}, {period2} (unix seconds, UTC midnight).
std::string build_url(std::string_view url_template, std::string_view symbol,
                      const DateRange& range = {});

// GET of the built URL, returning the raw body for parse_csv. http:// only.
std::string fetch_csv(std::string_view url_template, std::string_view symbol,
                      const DateRange& range = {});

}  // namespace drltrade
