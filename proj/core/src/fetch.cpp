#include <string>

#include "drltrade/errors.hpp"
#include "drltrade/market_data.hpp"
#include "httplib.h"

namespace drltrade {

namespace {

void replace_all(std::string& s, std::string_view token, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = s.find(token, pos)) != std::string::npos) {
    s.replace(pos, token.size(), value);
    pos += value.size();
  }
}

}  // namespace

std::string build_url(std::string_view url_template, std::string_view symbol,
                      const DateRange& range) {
  std::string url(url_template);
  replace_all(url, "{symbol}", std::string(symbol));
  if (range.start)
    replace_all(url, "{period1}", std::to_string(range.start->to_days() * 86400L));
  if (range.end)
    replace_all(url, "{period2}", std::to_string(range.end->to_days() * 86400L));
  return url;
}

std::string fetch_csv(std::string_view url_template, std::string_view symbol,
                      const DateRange& range) {
  const std::string url = build_url(url_template, symbol, range);

  if (url.rfind("https://", 0) == 0)
    throw NetworkError("https not supported by this build, use http or a local file");
  if (url.rfind("http://", 0) != 0)
    throw NetworkError("unsupported url scheme in '" + url + "'");

  const std::size_t host_start = 7;
  const std::size_t path_start = url.find('/', host_start);
  const std::string host = path_start == std::string::npos
                               ? url.substr(host_start)
                               : url.substr(host_start, path_start - host_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (host.empty()) throw NetworkError("empty host in '" + url + "'");

  httplib::Client client(("http://" + host).c_str());
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(30, 0);

  auto res = client.Get(path.c_str());
  if (!res) throw NetworkError("request to " + host + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw HttpStatusError(res->status);
  return res->body;
}

}  // namespace drltrade
