#include "polarity/event_study.hpp"

#include "polarity/errors.hpp"
#include "polarity/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace polarity {
namespace {

bool parse_int(std::string_view s, long& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

template <typename Row>
void read_csv(const std::filesystem::path& path, std::string_view header, std::size_t n_fields, Row&& row) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != header) throw ParseError(path.string(), 1, "expected header '" + std::string(header) + "'");
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != n_fields)
      throw ParseError(path.string(), line_no, "expected " + std::to_string(n_fields) + " fields");
    row(fields, line_no);
  }
  if (line_no == 0) throw ParseError(path.string(), 1, "empty file");
}

}  // namespace

Date parse_date(std::string_view text) {
  using namespace std::chrono;
  long y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_int(text.substr(0, 4), y) ||
      !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d))
    throw InputError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  const year_month_day ymd{year{static_cast<int>(y)}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw InputError("invalid date '" + std::string(text) + "'");
  return sys_days{ymd};
}

std::string format_date(Date d) {
  using namespace std::chrono;
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

void PriceSeries::validate() const {
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto& [date, price] = observations[i];
    if (!std::isfinite(price) || price <= 0)
      throw InputError(instrument_id + ": non-positive price on " + format_date(date));
    if (i > 0 && !(observations[i - 1].first < date))
      throw InputError(instrument_id + ": dates not strictly increasing at " + format_date(date));
  }
}

ReturnSeries simple_returns(const PriceSeries& series) {
  if (series.observations.size() < 2) throw InputError(series.instrument_id + ": need at least 2 prices for returns");
  series.validate();
  ReturnSeries out;
  out.reserve(series.observations.size() - 1);
  for (std::size_t i = 1; i < series.observations.size(); ++i)
    out.emplace_back(series.observations[i].first,
                     series.observations[i].second / series.observations[i - 1].second - 1.0);
  return out;
}

MarketModelFit market_model(const PriceSeries& stock, const PriceSeries& market, Date event_date,
                            int estimation_window) {
  if (estimation_window < 5) throw ConfigError("estimation window must be at least 5 trading days");
  stock.validate();
  market.validate();

  PriceSeries s{stock.instrument_id, {}}, m{market.instrument_id, {}};
  {
    std::size_t i = 0, j = 0;
    while (i < stock.observations.size() && j < market.observations.size()) {
      const auto ds = stock.observations[i].first, dm = market.observations[j].first;
      if (ds < dm) {
        ++i;
      } else if (dm < ds) {
        ++j;
      } else {
        s.observations.push_back(stock.observations[i++]);
        m.observations.push_back(market.observations[j++]);
      }
    }
  }
  const auto it = std::find_if(s.observations.begin(), s.observations.end(),
                               [&](const auto& o) { return o.first == event_date; });
  if (it == s.observations.end())
    throw CoverageError(stock.instrument_id + ": event date " + format_date(event_date) +
                        " is not a trading day shared by the stock and market series");
  // returns index e-1 is the event-day return; the window is the `estimation_window` returns before it
  const auto e = static_cast<std::size_t>(it - s.observations.begin());
  const std::size_t need = static_cast<std::size_t>(estimation_window) + 1;
  if (e < need) {
    const std::string since =
        s.observations.empty() ? std::string("none") : format_date(s.observations.front().first);
    throw CoverageError(stock.instrument_id + ": need " + std::to_string(need) + " shared trading days before " +
                        format_date(event_date) + ", found " + std::to_string(e) + " (first shared day " + since + ")");
  }
  s.observations.resize(e + 1);
  m.observations.resize(e + 1);
  s.observations.erase(s.observations.begin(), s.observations.end() - static_cast<std::ptrdiff_t>(need + 1));
  m.observations.erase(m.observations.begin(), m.observations.end() - static_cast<std::ptrdiff_t>(need + 1));
  const auto rs = simple_returns(s), rm = simple_returns(m);

  const std::size_t w = static_cast<std::size_t>(estimation_window);
  double ms = 0, mm = 0;
  for (std::size_t k = 0; k < w; ++k) {
    ms += rs[k].second;
    mm += rm[k].second;
  }
  ms /= static_cast<double>(w);
  mm /= static_cast<double>(w);
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < w; ++k) {
    const double dx = rm[k].second - mm;
    sxx += dx * dx;
    sxy += dx * (rs[k].second - ms);
  }
  if (sxx == 0)
    throw EstimationError(stock.instrument_id + ": market returns have zero variance in the estimation window before " +
                          format_date(event_date));

  MarketModelFit fit;
  fit.beta = sxy / sxx;
  fit.alpha = ms - fit.beta * mm;
  for (std::size_t k = 0; k < w; ++k) fit.residuals.push_back(rs[k].second - (fit.alpha + fit.beta * rm[k].second));
  fit.stock_return = rs[w].second;
  fit.market_return = rm[w].second;
  fit.abnormal_return = fit.stock_return - (fit.alpha + fit.beta * fit.market_return);
  return fit;
}

double abnormal_return(const PriceSeries& stock, const PriceSeries& market, Date event_date, int estimation_window) {
  return market_model(stock, market, event_date, estimation_window).abnormal_return;
}

std::vector<EventSpec> filter_events(const std::vector<EventSpec>& events, long min_words, double min_price) {
  std::vector<EventSpec> out;
  for (const auto& e : events)
    if (e.word_count >= min_words && e.price_at_event >= min_price) out.push_back(e);
  return out;
}

PriceSeries load_price_csv(const std::filesystem::path& path, std::string instrument_id) {
  PriceSeries series;
  series.instrument_id = instrument_id.empty() ? path.stem().string() : std::move(instrument_id);
  read_csv(path, "date,price", 2, [&](const std::vector<std::string>& f, std::size_t line) {
    double price = 0;
    if (!parse_double(f[1], price)) throw ParseError(path.string(), line, "price '" + f[1] + "' is not a number");
    if (!std::isfinite(price) || price <= 0) throw ParseError(path.string(), line, "price must be positive");
    Date d;
    try {
      d = parse_date(f[0]);
    } catch (const InputError& e) {
      throw ParseError(path.string(), line, e.what());
    }
    if (!series.observations.empty() && !(series.observations.back().first < d))
      throw ParseError(path.string(), line, "dates must be strictly increasing");
    series.observations.emplace_back(d, price);
  });
  return series;
}

std::vector<EventSpec> load_events_csv(const std::filesystem::path& path) {
  std::vector<EventSpec> events;
  read_csv(path, "doc_id,instrument_id,event_date,word_count,price", 5,
           [&](const std::vector<std::string>& f, std::size_t line) {
             EventSpec e;
             e.doc_id = f[0];
             e.instrument_id = f[1];
             if (e.doc_id.empty() || e.instrument_id.empty())
               throw ParseError(path.string(), line, "empty doc_id or instrument_id");
             try {
               e.event_date = parse_date(f[2]);
             } catch (const InputError& ex) {
               throw ParseError(path.string(), line, ex.what());
             }
             if (!parse_int(f[3], e.word_count) || e.word_count < 0)
               throw ParseError(path.string(), line, "word_count '" + f[3] + "' is not a non-negative integer");
             if (!parse_double(f[4], e.price_at_event) || !std::isfinite(e.price_at_event))
               throw ParseError(path.string(), line, "price '" + f[4] + "' is not a number");
             events.push_back(std::move(e));
           });
  return events;
}

std::vector<EventResult> run_event_study(const std::vector<EventSpec>& events, const std::filesystem::path& prices_dir,
                                         const PriceSeries& market, int estimation_window) {
  std::map<std::string, PriceSeries> cache;
  std::vector<EventResult> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    auto it = cache.find(e.instrument_id);
    if (it == cache.end())
      it = cache.emplace(e.instrument_id, load_price_csv(prices_dir / (e.instrument_id + ".csv"), e.instrument_id))
               .first;
    out.push_back({e.doc_id, abnormal_return(it->second, market, e.event_date, estimation_window)});
  }
  return out;
}

std::string event_results_csv(const std::vector<EventResult>& results) {
  std::string out = "doc_id,abnormal_return\n";
  for (const auto& r : results) out += r.doc_id + "," + format_double(r.abnormal_return) + "\n";
  return out;
}

}  // namespace polarity
