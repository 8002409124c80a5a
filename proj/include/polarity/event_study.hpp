#pragma once

// Market-model abnormal returns around disclosure dates.

#include "polarity/types.hpp"

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace polarity {

using Date = std::chrono::sys_days;

/// Strict YYYY-MM-DD; throws InputError otherwise.
Date parse_date(std::string_view text);
std::string format_date(Date d);

struct PriceSeries {
  std::string instrument_id;
  std::vector<std::pair<Date, double>> observations;  // strictly increasing dates

  /// Throws InputError on unordered dates or non-positive prices.
  void validate() const;
};

struct EventSpec {
  std::string doc_id;
  std::string instrument_id;
  Date event_date{};
  long word_count = 0;
  double price_at_event = 0;
};

using ReturnSeries = std::vector<std::pair<Date, double>>;

/// r_t = p_t / p_{t-1} - 1, dated at t.
ReturnSeries simple_returns(const PriceSeries& series);

struct MarketModelFit {
  double alpha = 0;
  double beta = 0;
  double abnormal_return = 0;
  double stock_return = 0;   // event day
  double market_return = 0;  // event day
  std::vector<double> residuals;  // estimation window
};

/// Prices are aligned on the dates both series share; returns are taken
/// between consecutive shared dates. The market model is fitted by OLS on
/// the `estimation_window` returns ending the day before `event_date`.
MarketModelFit market_model(const PriceSeries& stock, const PriceSeries& market, Date event_date,
                            int estimation_window = 10);

double abnormal_return(const PriceSeries& stock, const PriceSeries& market, Date event_date,
                       int estimation_window = 10);

/// Keeps events with word_count >= min_words and price >= min_price.
std::vector<EventSpec> filter_events(const std::vector<EventSpec>& events, long min_words = 200,
                                     double min_price = 5.0);

/// `date,price` with a header line.
PriceSeries load_price_csv(const std::filesystem::path& path, std::string instrument_id = {});

/// `doc_id,instrument_id,event_date,word_count,price` with a header line.
std::vector<EventSpec> load_events_csv(const std::filesystem::path& path);

struct EventResult {
  std::string doc_id;
  double abnormal_return = 0;
};

/// Stock prices are read from `<prices_dir>/<instrument_id>.csv`.
std::vector<EventResult> run_event_study(const std::vector<EventSpec>& events, const std::filesystem::path& prices_dir,
                                         const PriceSeries& market, int estimation_window = 10);

/// `doc_id,abnormal_return`, the response format read by the build command.
std::string event_results_csv(const std::vector<EventResult>& results);

}  // namespace polarity
