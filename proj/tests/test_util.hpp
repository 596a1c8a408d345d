// Shared fixtures for the test suites.
#pragma once

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "drltrade/features.hpp"
#include "drltrade/market_data.hpp"
#include "drltrade/rng.hpp"

namespace testutil {

using namespace drltrade;

// Geometric random walk prices, positive by construction.
inline std::vector<double> gbm_prices(std::size_t n, std::uint64_t seed,
                                      double start = 100.0, double drift = 0.0002,
                                      double vol = 0.015) {
  Rng rng(seed);
  std::vector<double> p(n);
  double x = start;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = x;
    x *= std::exp(drift + vol * rng.normal());
  }
  return p;
}

// Bars with consistent OHLC envelope around a close path.
inline PriceSeries series_from_prices(const std::vector<double>& close,
                                      std::string asset_id = "TEST",
                                      Date start_date = Date{2015, 8, 30}) {
  PriceSeries s;
  s.asset_id = std::move(asset_id);
  s.bars.reserve(close.size());
  for (std::size_t i = 0; i < close.size(); ++i) {
    OhlcvBar b;
    b.date = start_date.plus_days(static_cast<long>(i));
    b.close = close[i];
    b.adj_close = close[i];
    b.open = i == 0 ? close[i] : close[i - 1];
    b.high = std::max(b.open, b.close) * 1.01;
    b.low = std::min(b.open, b.close) * 0.99;
    b.volume = 1e6 + 1e3 * static_cast<double>(i % 97);
    s.bars.push_back(b);
  }
  return s;
}

inline PriceSeries gbm_series(std::size_t n, std::uint64_t seed,
                              std::string asset_id = "TEST") {
  return series_from_prices(gbm_prices(n, seed), std::move(asset_id));
}

// Synthetic feature matrix for environment/agent tests that do not care
// about indicator values.
inline FeatureMatrix synthetic_features(std::size_t rows, std::uint64_t seed,
                                        int lookback = 4, double drift = 0.0,
                                        double vol = 0.01) {
  Rng rng(seed);
  FeatureMatrix fm;
  fm.asset_id = "SYN";
  fm.lookback = lookback;
  fm.start_index = 0;
  double price = 100.0;
  for (std::size_t i = 0; i < rows; ++i) {
    fm.dates.push_back(Date{2020, 1, 1}.plus_days(static_cast<long>(i)));
    fm.prices.push_back(price);
    price *= std::exp(drift + vol * rng.normal());
    FeatureRow r;
    r.norm_close = rng.uniform(-2, 2);
    r.ret_1m = rng.uniform(-2, 2);
    r.ret_2m = rng.uniform(-2, 2);
    r.ret_3m = rng.uniform(-2, 2);
    r.ret_1y = rng.uniform(-2, 2);
    r.macd = rng.uniform(-2, 2);
    r.rsi = rng.uniform(0, 100);
    fm.rows.push_back(r);
  }
  return fm;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("drltrade_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
