#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "drltrade/date.hpp"
#include "drltrade/market_data.hpp"
#include "drltrade/matrix.hpp"

namespace drltrade {

// A value series aligned to the indices of its source sequence. Entries
// before first_valid are the warmup region and hold NaN.
struct AlignedSeries {
  std::vector<double> values;
  std::size_t first_valid = 0;

  std::size_t size() const { return values.size(); }
  bool valid(std::size_t t) const { return t >= first_valid && t < values.size(); }
  double operator[](std::size_t t) const { return values[t]; }

  // Checked access: throws InsufficientHistory below first_valid.
  double at(std::size_t t) const;
};

struct FeatureConfig {
  int ewm_span = 60;            // span of the return-volatility EWM std
  int macd_short = 8;           // EWMA half-life, days
  int macd_long = 24;           // EWMA half-life, days
  int rsi_window = 30;
  bool rsi_wilder = true;       // false: plain rolling-average RSI
  int norm_close_window = 60;
  int lookback = 60;            // observations stacked into one state
  double eps_sigma = 1e-8;      // floor on every std used as a divisor
  PriceField price_field = PriceField::adj_close;
};

// One day of the seven state features, in the order agents consume them.
struct FeatureRow {
  double norm_close = 0;
  double ret_1m = 0;
  double ret_2m = 0;
  double ret_3m = 0;
  double ret_1y = 0;
  double macd = 0;
  double rsi = 0;

  static constexpr int kCount = 7;
  double get(int i) const;
};

struct FeatureMatrix {
  std::string asset_id;
  int lookback = 60;
  std::size_t start_index = 0;  // price index of rows[0] in the source series
  std::vector<Date> dates;      // per row
  std::vector<double> prices;   // configured price field, per row
  std::vector<FeatureRow> rows;

  std::size_t size() const { return rows.size(); }
};

// The MDP observation: `lookback` consecutive FeatureRows ending at a day.
struct StateWindow {
  Matrix values;              // lookback x 7, chronological
  std::size_t end_index = 0;  // feature-row index of the last row
};

// sigma_t of a return sequence: exponentially weighted moving std with decay
// alpha = 2/(span+1), finite warm-start weights, bias-corrected variance,
// floored at eps_sigma. Valid from index 1.
AlignedSeries ewm_std(std::span<const double> returns, int span = 60,
                      double eps_sigma = 1e-8);

// (p_t/p_{t-h} - 1) / (sigma_t * sqrt(h)); sigma aligned to prices.
AlignedSeries vol_normalized_return(std::span<const double> prices, int horizon_days,
                                    const AlignedSeries& sigma, double eps_sigma = 1e-8);

// q_t = (ewma(p, halflife=S) - ewma(p, halflife=L)) / std(p over [t-63, t-1]);
// macd_t = q_t / std(q over [t-252, t-1]). Rolling windows are the w values
// strictly before t (slice convention), sample std.
AlignedSeries macd(std::span<const double> prices, int short_scale = 8,
                   int long_scale = 24, double eps_sigma = 1e-8);

// 0-100 oscillator from Wilder-smoothed average gains/losses. avg_loss == 0
// maps to 100, both zero to 50.
AlignedSeries rsi(std::span<const double> prices, int window = 30, bool wilder = true);

// z-score of p_t against the trailing `window` days [t-window, t-1].
AlignedSeries normalize_close(std::span<const double> prices, int window = 60,
                              double eps_sigma = 1e-8);

// Full seven-feature matrix; rows start at the joint warmup index.
FeatureMatrix build_features(const PriceSeries& series, const FeatureConfig& config = {});

// Rows [t-lookback+1, t] stacked chronologically.
StateWindow build_state(const FeatureMatrix& features, std::size_t t, int lookback = 60);

struct FeatureSplit {
  FeatureMatrix train;
  FeatureMatrix test;
};

// Partition full-series features at a price index. The test side keeps
// lookback-1 rows of history so its first decision state ends exactly on the
// first test day; test-side decisions all fall on test dates.
FeatureSplit split_features(const FeatureMatrix& full, std::size_t split_price_index);

void write_features_csv(std::ostream& out, const FeatureMatrix& features);

}  // namespace drltrade
