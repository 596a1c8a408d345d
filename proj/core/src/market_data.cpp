#include "drltrade/market_data.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "drltrade/errors.hpp"
#include "drltrade/num_format.hpp"

namespace drltrade {

namespace {

constexpr std::array<std::string_view, 7> kColumns = {
    "Date", "Open", "High", "Low", "Close", "Adj Close", "Volume"};

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool is_null_field(std::string_view s) { return s.empty() || s == "null"; }

double parse_number(std::string_view s, std::size_t line_no, std::string_view col) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw MalformedRowError(line_no, "field '" + std::string(col) +
                                         "' is not a number: '" + std::string(s) + "'");
  if (!std::isfinite(v))
    throw MalformedRowError(line_no, "field '" + std::string(col) + "' is not finite");
  return v;
}

void check_bar(const OhlcvBar& b, std::size_t line_no) {
  if (b.open <= 0 || b.high <= 0 || b.low <= 0 || b.close <= 0 || b.adj_close <= 0)
    throw MalformedRowError(line_no, "non-positive price");
  if (b.volume < 0) throw MalformedRowError(line_no, "negative volume");
  if (b.low > b.high) throw MalformedRowError(line_no, "low > high");
  if (b.low > std::min(b.open, b.close))
    throw MalformedRowError(line_no, "low above open/close");
  if (b.high < std::max(b.open, b.close))
    throw MalformedRowError(line_no, "high below open/close");
}

}  // namespace

PriceField price_field_from_string(std::string_view name) {
  if (name == "adj_close") return PriceField::adj_close;
  if (name == "close") return PriceField::close;
  throw Error("unknown price field '" + std::string(name) + "' (adj_close|close)");
}

std::string_view to_string(PriceField f) {
  return f == PriceField::adj_close ? "adj_close" : "close";
}

std::vector<double> PriceSeries::prices(PriceField f) const {
  std::vector<double> out(bars.size());
  for (std::size_t i = 0; i < bars.size(); ++i) out[i] = price(i, f);
  return out;
}

ParseResult parse_csv(std::string_view text, std::string asset_id) {
  ParseResult result;
  result.series.asset_id = std::move(asset_id);
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.remove_prefix(3);  // UTF-8 BOM

  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::array<int, 7> col_index;
  col_index.fill(-1);

  struct PendingRow {
    OhlcvBar bar;
    std::size_t line_no;
  };
  std::vector<PendingRow> rows;

  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    auto fields = split_line(line);
    for (auto& f : fields) f = trim(f);

    if (line_no == 1 || col_index[0] == -1) {
      // header
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto it = std::find(kColumns.begin(), kColumns.end(), fields[i]);
        if (it == kColumns.end())
          throw MalformedRowError(line_no, "unexpected column '" + std::string(fields[i]) + "'");
        const auto slot = static_cast<std::size_t>(it - kColumns.begin());
        if (col_index[slot] != -1)
          throw MalformedRowError(line_no, "repeated column '" + std::string(fields[i]) + "'");
        col_index[slot] = static_cast<int>(i);
      }
      for (std::size_t c = 0; c < kColumns.size(); ++c)
        if (col_index[c] == -1) throw MissingColumnError(std::string(kColumns[c]));
      continue;
    }

    if (fields.size() != kColumns.size())
      throw MalformedRowError(line_no, "expected 7 fields, got " + std::to_string(fields.size()));

    const auto field = [&](std::size_t slot) {
      return fields[static_cast<std::size_t>(col_index[slot])];
    };

    bool has_null = false;
    for (std::size_t slot = 1; slot < kColumns.size(); ++slot)
      if (is_null_field(field(slot))) has_null = true;
    if (has_null) {
      ++result.rows_dropped;
      continue;
    }

    OhlcvBar bar;
    try {
      bar.date = Date::parse(field(0));
    } catch (const Error& e) {
      throw MalformedRowError(line_no, e.what());
    }
    bar.open = parse_number(field(1), line_no, "Open");
    bar.high = parse_number(field(2), line_no, "High");
    bar.low = parse_number(field(3), line_no, "Low");
    bar.close = parse_number(field(4), line_no, "Close");
    bar.adj_close = parse_number(field(5), line_no, "Adj Close");
    bar.volume = parse_number(field(6), line_no, "Volume");
    check_bar(bar, line_no);
    rows.push_back({bar, line_no});
  }

  if (col_index[0] == -1) throw MissingColumnError("Date");
  if (rows.empty()) throw EmptySeriesError();

  std::stable_sort(rows.begin(), rows.end(),
                   [](const PendingRow& a, const PendingRow& b) { return a.bar.date < b.bar.date; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].bar.date == rows[i - 1].bar.date)
      throw MalformedRowError(rows[i].line_no,
                              "duplicate date " + rows[i].bar.date.to_string());

  result.series.bars.reserve(rows.size());
  for (const auto& r : rows) result.series.bars.push_back(r.bar);
  return result;
}

std::string serialize_csv(const PriceSeries& series) {
  std::string out = "Date,Open,High,Low,Close,Adj Close,Volume\n";
  for (const auto& b : series.bars) {
    out += b.date.to_string();
    out += ',';
    out += format_exact(b.open);
    out += ',';
    out += format_exact(b.high);
    out += ',';
    out += format_exact(b.low);
    out += ',';
    out += format_exact(b.close);
    out += ',';
    out += format_exact(b.adj_close);
    out += ',';
    out += format_exact(b.volume);
    out += '\n';
  }
  return out;
}

std::size_t split_index(std::size_t n, double train_fraction) {
  // round-half-up; a plain floor would let (n=2, f=0.99) produce a 1/1 split
  // instead of flagging the test side as effectively empty
  return static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * train_fraction + 0.5));
}

SplitResult chronological_split(const PriceSeries& series, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("train_fraction must be in (0,1)");
  const std::size_t n = series.size();
  if (n < 2) throw DegenerateSplitError("need at least 2 bars to split");
  const std::size_t k = split_index(n, train_fraction);
  if (k == 0 || k == n)
    throw DegenerateSplitError("split leaves an empty side (n=" + std::to_string(n) +
                               ", fraction=" + format_exact(train_fraction) + ")");
  SplitResult out;
  out.train.asset_id = series.asset_id;
  out.test.asset_id = series.asset_id;
  out.train.bars.assign(series.bars.begin(), series.bars.begin() + static_cast<std::ptrdiff_t>(k));
  out.test.bars.assign(series.bars.begin() + static_cast<std::ptrdiff_t>(k), series.bars.end());
  return out;
}

}  // namespace drltrade
