#include "drltrade/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "drltrade/errors.hpp"
#include "drltrade/num_format.hpp"

namespace drltrade {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

AlignedSeries make_series(std::size_t n, std::size_t first_valid) {
  AlignedSeries s;
  s.values.assign(n, kNaN);
  s.first_valid = std::min(first_valid, n);
  return s;
}

// Sample std of x[t-w .. t-1]; two-pass per window keeps the arithmetic
// independent of where the window sits in the series.
double trailing_std(std::span<const double> x, std::size_t t, int w) {
  double mean = 0;
  for (std::size_t i = t - static_cast<std::size_t>(w); i < t; ++i) mean += x[i];
  mean /= w;
  double ss = 0;
  for (std::size_t i = t - static_cast<std::size_t>(w); i < t; ++i) {
    const double d = x[i] - mean;
    ss += d * d;
  }
  return std::sqrt(ss / (w - 1));
}

double trailing_mean(std::span<const double> x, std::size_t t, int w) {
  double mean = 0;
  for (std::size_t i = t - static_cast<std::size_t>(w); i < t; ++i) mean += x[i];
  return mean / w;
}

std::vector<double> daily_returns(std::span<const double> prices) {
  std::vector<double> r(prices.size(), kNaN);
  for (std::size_t t = 1; t < prices.size(); ++t) r[t] = prices[t] / prices[t - 1] - 1.0;
  return r;
}

// m(S)_t - m(L)_t where m(k) is the EWMA with half-life k and finite
// warm-start normalization: m_t = sum_i lam^i x_{t-i} / sum_i lam^i,
// lam = 2^(-1/k). Accumulated over deviations from x[0], so the spread of a
// constant series cancels exactly instead of leaving rounding residue for
// the eps-floored divisor to blow up.
std::vector<double> ewma_spread(std::span<const double> x, int short_halflife,
                                int long_halflife) {
  const double lam_s = std::exp2(-1.0 / short_halflife);
  const double lam_l = std::exp2(-1.0 / long_halflife);
  std::vector<double> out(x.size(), kNaN);
  if (x.empty()) return out;
  const double base = x[0];
  double num_s = 0, den_s = 0, num_l = 0, den_l = 0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double d = x[t] - base;
    num_s = lam_s * num_s + d;
    den_s = lam_s * den_s + 1.0;
    num_l = lam_l * num_l + d;
    den_l = lam_l * den_l + 1.0;
    out[t] = num_s / den_s - num_l / den_l;
  }
  return out;
}

}  // namespace

double AlignedSeries::at(std::size_t t) const {
  if (t >= values.size())
    throw Error("series index " + std::to_string(t) + " out of range");
  if (t < first_valid) throw InsufficientHistoryError(first_valid, t);
  return values[t];
}

double FeatureRow::get(int i) const {
  switch (i) {
    case 0: return norm_close;
    case 1: return ret_1m;
    case 2: return ret_2m;
    case 3: return ret_3m;
    case 4: return ret_1y;
    case 5: return macd;
    case 6: return rsi;
  }
  throw Error("feature index out of range");
}

AlignedSeries ewm_std(std::span<const double> returns, int span, double eps_sigma) {
  if (span < 2) throw Error("ewm span must be >= 2");
  const std::size_t n = returns.size();
  AlignedSeries out = make_series(n, 1);
  if (n == 0) return out;

  const double alpha = 2.0 / (span + 1);
  const double decay = 1.0 - alpha;

  // Running weighted sums; weights are (1-alpha)^lag, newest weight 1.
  double w_sum = 0;    // sum of weights
  double w2_sum = 0;   // sum of squared weights (bias correction)
  double x_sum = 0;    // weighted sum of x
  double x2_sum = 0;   // weighted sum of x^2
  for (std::size_t t = 0; t < n; ++t) {
    w_sum = decay * w_sum + 1.0;
    w2_sum = decay * decay * w2_sum + 1.0;
    x_sum = decay * x_sum + returns[t];
    x2_sum = decay * x2_sum + returns[t] * returns[t];
    if (t < 1) continue;
    const double mean = x_sum / w_sum;
    const double biased_var = x2_sum / w_sum - mean * mean;
    const double correction = w_sum * w_sum / (w_sum * w_sum - w2_sum);
    const double sd = std::sqrt(std::max(0.0, biased_var * correction));
    out.values[t] = std::max(sd, eps_sigma);
  }
  return out;
}

AlignedSeries vol_normalized_return(std::span<const double> prices, int horizon_days,
                                    const AlignedSeries& sigma, double eps_sigma) {
  if (horizon_days < 1) throw Error("horizon must be >= 1");
  if (sigma.size() != prices.size())
    throw Error("sigma must be aligned to prices");
  const std::size_t h = static_cast<std::size_t>(horizon_days);
  const double root_h = std::sqrt(static_cast<double>(horizon_days));
  AlignedSeries out = make_series(prices.size(), std::max(h, sigma.first_valid));
  for (std::size_t t = out.first_valid; t < prices.size(); ++t) {
    const double s = std::max(sigma[t], eps_sigma);
    out.values[t] = (prices[t] / prices[t - h] - 1.0) / (s * root_h);
  }
  return out;
}

AlignedSeries macd(std::span<const double> prices, int short_scale, int long_scale,
                   double eps_sigma) {
  if (!(long_scale >= short_scale && short_scale >= 2))
    throw Error("macd scales must satisfy L >= S >= 2");
  constexpr int kPriceStdWindow = 63;
  constexpr int kMacdStdWindow = 252;

  const std::size_t n = prices.size();
  const auto spread = ewma_spread(prices, short_scale, long_scale);

  std::vector<double> q(n, kNaN);
  const std::size_t q_first = kPriceStdWindow;
  for (std::size_t t = q_first; t < n; ++t) {
    const double denom = std::max(trailing_std(prices, t, kPriceStdWindow), eps_sigma);
    q[t] = spread[t] / denom;
  }

  AlignedSeries out = make_series(n, q_first + kMacdStdWindow);
  for (std::size_t t = out.first_valid; t < n; ++t) {
    const double denom = std::max(trailing_std(q, t, kMacdStdWindow), eps_sigma);
    out.values[t] = q[t] / denom;
  }
  return out;
}

AlignedSeries rsi(std::span<const double> prices, int window, bool wilder) {
  if (window < 1) throw Error("rsi window must be >= 1");
  const std::size_t n = prices.size();
  const std::size_t w = static_cast<std::size_t>(window);
  AlignedSeries out = make_series(n, w);
  if (n <= w) return out;

  std::vector<double> gain(n, 0.0), loss(n, 0.0);
  for (std::size_t t = 1; t < n; ++t) {
    const double change = prices[t] - prices[t - 1];
    gain[t] = change > 0 ? change : 0.0;
    loss[t] = change < 0 ? -change : 0.0;
  }

  const auto rsi_value = [](double avg_gain, double avg_loss) {
    if (avg_loss == 0.0 && avg_gain == 0.0) return 50.0;
    if (avg_loss == 0.0) return 100.0;
    return 100.0 - 100.0 / (1.0 + avg_gain / avg_loss);
  };

  if (wilder) {
    double avg_gain = 0, avg_loss = 0;
    for (std::size_t t = 1; t <= w; ++t) {
      avg_gain += gain[t];
      avg_loss += loss[t];
    }
    avg_gain /= window;
    avg_loss /= window;
    out.values[w] = rsi_value(avg_gain, avg_loss);
    for (std::size_t t = w + 1; t < n; ++t) {
      avg_gain = (avg_gain * (window - 1) + gain[t]) / window;
      avg_loss = (avg_loss * (window - 1) + loss[t]) / window;
      out.values[t] = rsi_value(avg_gain, avg_loss);
    }
  } else {
    for (std::size_t t = w; t < n; ++t) {
      double avg_gain = 0, avg_loss = 0;
      for (std::size_t i = t - w + 1; i <= t; ++i) {
        avg_gain += gain[i];
        avg_loss += loss[i];
      }
      out.values[t] = rsi_value(avg_gain / window, avg_loss / window);
    }
  }
  return out;
}

AlignedSeries normalize_close(std::span<const double> prices, int window, double eps_sigma) {
  if (window < 2) throw Error("normalize window must be >= 2");
  const std::size_t w = static_cast<std::size_t>(window);
  AlignedSeries out = make_series(prices.size(), w);
  for (std::size_t t = w; t < prices.size(); ++t) {
    const double mean = trailing_mean(prices, t, window);
    const double sd = std::max(trailing_std(prices, t, window), eps_sigma);
    out.values[t] = (prices[t] - mean) / sd;
  }
  return out;
}

FeatureMatrix build_features(const PriceSeries& series, const FeatureConfig& config) {
  const std::vector<double> prices = series.prices(config.price_field);
  const std::size_t n = prices.size();

  // MACD is the long pole: 63-day price window plus the 252-day q window.
  const std::size_t warmup = 63 + 252;
  if (n < warmup + 1) throw InsufficientHistoryError(warmup + 1, n);

  const auto returns = daily_returns(prices);
  AlignedSeries sigma_ret =
      ewm_std(std::span(returns).subspan(1), config.ewm_span, config.eps_sigma);

  // Re-align sigma from return indices to price indices (+1 shift).
  AlignedSeries sigma = make_series(n, sigma_ret.first_valid + 1);
  for (std::size_t t = sigma.first_valid; t < n; ++t) sigma.values[t] = sigma_ret[t - 1];

  const auto nc = normalize_close(prices, config.norm_close_window, config.eps_sigma);
  const auto r1m = vol_normalized_return(prices, 21, sigma, config.eps_sigma);
  const auto r2m = vol_normalized_return(prices, 42, sigma, config.eps_sigma);
  const auto r3m = vol_normalized_return(prices, 63, sigma, config.eps_sigma);
  const auto r1y = vol_normalized_return(prices, 252, sigma, config.eps_sigma);
  const auto md = macd(prices, config.macd_short, config.macd_long, config.eps_sigma);
  const auto rs = rsi(prices, config.rsi_window, config.rsi_wilder);

  std::size_t first = 0;
  for (const auto* s : {&nc, &r1m, &r2m, &r3m, &r1y, &md, &rs})
    first = std::max(first, s->first_valid);
  if (first >= n) throw InsufficientHistoryError(first + 1, n);

  FeatureMatrix fm;
  fm.asset_id = series.asset_id;
  fm.lookback = config.lookback;
  fm.start_index = first;
  fm.dates.reserve(n - first);
  fm.prices.reserve(n - first);
  fm.rows.reserve(n - first);
  for (std::size_t t = first; t < n; ++t) {
    FeatureRow row;
    row.norm_close = nc[t];
    row.ret_1m = r1m[t];
    row.ret_2m = r2m[t];
    row.ret_3m = r3m[t];
    row.ret_1y = r1y[t];
    row.macd = md[t];
    row.rsi = rs[t];
    for (int i = 0; i < FeatureRow::kCount; ++i)
      if (!std::isfinite(row.get(i)))
        throw Error("non-finite feature at " + series.bars[t].date.to_string());
    fm.dates.push_back(series.bars[t].date);
    fm.prices.push_back(prices[t]);
    fm.rows.push_back(row);
  }
  return fm;
}

StateWindow build_state(const FeatureMatrix& features, std::size_t t, int lookback) {
  const std::size_t lb = static_cast<std::size_t>(lookback);
  if (t >= features.size())
    throw Error("state index " + std::to_string(t) + " out of range");
  if (t + 1 < lb) throw InsufficientHistoryError(lb - 1, t);

  StateWindow w;
  w.end_index = t;
  w.values = Matrix(lookback, FeatureRow::kCount);
  for (int r = 0; r < lookback; ++r) {
    const FeatureRow& row = features.rows[t + 1 - lb + static_cast<std::size_t>(r)];
    for (int c = 0; c < FeatureRow::kCount; ++c) w.values.at(r, c) = row.get(c);
  }
  return w;
}

FeatureSplit split_features(const FeatureMatrix& full, std::size_t split_price_index) {
  const std::size_t lb = static_cast<std::size_t>(full.lookback);
  if (split_price_index <= full.start_index + lb)
    throw InsufficientHistoryError(full.start_index + lb + 1, split_price_index);
  const std::size_t split_row = split_price_index - full.start_index;
  if (split_row >= full.size())
    throw DegenerateSplitError("split index beyond feature range");

  const auto slice = [&](std::size_t from, std::size_t to) {
    FeatureMatrix out;
    out.asset_id = full.asset_id;
    out.lookback = full.lookback;
    out.start_index = full.start_index + from;
    out.dates.assign(full.dates.begin() + static_cast<std::ptrdiff_t>(from),
                     full.dates.begin() + static_cast<std::ptrdiff_t>(to));
    out.prices.assign(full.prices.begin() + static_cast<std::ptrdiff_t>(from),
                      full.prices.begin() + static_cast<std::ptrdiff_t>(to));
    out.rows.assign(full.rows.begin() + static_cast<std::ptrdiff_t>(from),
                    full.rows.begin() + static_cast<std::ptrdiff_t>(to));
    return out;
  };

  FeatureSplit out;
  out.train = slice(0, split_row);
  out.test = slice(split_row - (lb - 1), full.size());
  return out;
}

void write_features_csv(std::ostream& out, const FeatureMatrix& features) {
  out << "date,norm_close,ret_1m,ret_2m,ret_3m,ret_1y,macd,rsi\n";
  for (std::size_t i = 0; i < features.size(); ++i) {
    out << features.dates[i].to_string();
    for (int c = 0; c < FeatureRow::kCount; ++c)
      out << ',' << format_sig10(features.rows[i].get(c));
    out << '\n';
  }
}

}  // namespace drltrade
