#include "polarity/hypotheses.hpp"

#include <limits>
#include <numeric>

namespace polarity {
namespace {

struct Moments {
  double mean = 0;
  double var = 0;  // sample (n-1)
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.var = ss / static_cast<double>(v.size() - 1);
  return m;
}

void check_sample(const std::vector<double>& v, const char* name) {
  if (v.size() < 2) throw InputError(std::string(name) + " needs at least 2 values");
  for (double x : v)
    if (!std::isfinite(x)) throw InputError(std::string(name) + " contains a non-finite value");
}

// t = +/-inf or 0 with the matching p-value when the standard error vanishes.
void degenerate(WelchResult& r, double diff) {
  if (diff == 0) {
    r.t_statistic = 0;
    r.p_value = r.alternative == Alternative::two_sided ? 1.0 : 0.5;
    return;
  }
  r.t_statistic = diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  switch (r.alternative) {
    case Alternative::two_sided:
      r.p_value = 0;
      break;
    case Alternative::less:
      r.p_value = diff < 0 ? 0.0 : 1.0;
      break;
    case Alternative::greater:
      r.p_value = diff > 0 ? 0.0 : 1.0;
      break;
  }
}

}  // namespace

std::string_view to_string(Alternative a) {
  switch (a) {
    case Alternative::less:
      return "less";
    case Alternative::greater:
      return "greater";
    default:
      return "two_sided";
  }
}

Alternative alternative_from_string(std::string_view s) {
  if (s == "two_sided" || s == "two-sided") return Alternative::two_sided;
  if (s == "less") return Alternative::less;
  if (s == "greater") return Alternative::greater;
  throw ConfigError("unknown alternative '" + std::string(s) + "'");
}

double detail::p_from_t(double t, double df, Alternative alternative) {
  switch (alternative) {
    case Alternative::less:
      return student_t_cdf(t, df);
    case Alternative::greater:
      return student_t_sf(t, df);
    default:
      return student_t_two_sided(t, df);
  }
}

WelchResult welch_t(const std::vector<double>& sample_1, const std::vector<double>& sample_2,
                    Alternative alternative) {
  check_sample(sample_1, "welch_t: sample 1");
  check_sample(sample_2, "welch_t: sample 2");
  const double n1 = static_cast<double>(sample_1.size()), n2 = static_cast<double>(sample_2.size());
  const auto a = moments(sample_1), b = moments(sample_2);

  WelchResult r;
  r.alternative = alternative;
  r.mean_1 = a.mean;
  r.mean_2 = b.mean;
  const double v1 = a.var / n1, v2 = b.var / n2;
  const double se2 = v1 + v2;
  if (se2 == 0) {
    r.degrees_of_freedom = n1 + n2 - 2;
    degenerate(r, a.mean - b.mean);
    return r;
  }
  r.t_statistic = (a.mean - b.mean) / std::sqrt(se2);
  r.degrees_of_freedom = se2 * se2 / (v1 * v1 / (n1 - 1) + v2 * v2 / (n2 - 1));
  r.p_value = detail::p_from_t(r.t_statistic, r.degrees_of_freedom, alternative);
  return r;
}

WelchResult paired_t(const std::vector<double>& sample_1, const std::vector<double>& sample_2,
                     Alternative alternative) {
  if (sample_1.size() != sample_2.size()) throw InputError("paired_t: samples have different lengths");
  check_sample(sample_1, "paired_t: sample 1");
  check_sample(sample_2, "paired_t: sample 2");
  std::vector<double> d(sample_1.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = sample_1[i] - sample_2[i];
  const double n = static_cast<double>(d.size());
  const auto m = moments(d);

  WelchResult r;
  r.alternative = alternative;
  r.paired = true;
  r.mean_1 = moments(sample_1).mean;
  r.mean_2 = moments(sample_2).mean;
  r.degrees_of_freedom = n - 1;
  if (m.var == 0) {
    degenerate(r, m.mean);
    return r;
  }
  r.t_statistic = m.mean / std::sqrt(m.var / n);
  r.p_value = detail::p_from_t(r.t_statistic, r.degrees_of_freedom, alternative);
  return r;
}

TermPartition partition_by_reference(const PolarityDictionary& dict, const ReferenceDictionary& reference) {
  TermPartition p;
  for (const auto& e : dict.entries) {
    if (reference.entries.count(e.term))
      p.informative.push_back(e.term);
    else
      p.non_informative.push_back(e.term);
  }
  p.informative_share =
      dict.entries.empty() ? 0.0 : static_cast<double>(p.informative.size()) / static_cast<double>(dict.entries.size());
  return p;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) return undefined();
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

SummaryStatistics summarize(const std::vector<double>& values) {
  SummaryStatistics s;
  s.n = static_cast<Index>(values.size());
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  s.min = *mn;
  s.max = *mx;
  s.q25 = quantile(values, 0.25);
  s.median = quantile(values, 0.5);
  s.q75 = quantile(values, 0.75);
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : values) {
    const double d = x - s.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  if (values.size() > 1) s.sd = std::sqrt(m2 / (n - 1));
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 > 0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2) - 3;
  }
  return s;
}

PlacementReport placement_test(const std::vector<HalfScores>& halves, const std::vector<double>& responses,
                               double class_threshold, Alternative alternative) {
  if (halves.size() != responses.size()) throw InputError("placement: scores and responses differ in length");
  PlacementReport rep;
  rep.class_threshold = class_threshold;
  const char* names[3] = {"all", "positive", "negative"};
  std::array<std::array<std::vector<double>, 3>, 3> cols;  // panel x {mu1, mu2, mu}
  for (std::size_t i = 0; i < halves.size(); ++i) {
    const int side = responses[i] > class_threshold ? 1 : 2;
    for (int panel : {0, side}) {
      cols[panel][0].push_back(halves[i].mu1);
      cols[panel][1].push_back(halves[i].mu2);
      cols[panel][2].push_back(halves[i].mu);
    }
  }
  for (int p = 0; p < 3; ++p) {
    rep.panels[p].name = names[p];
    rep.panels[p].mu1 = summarize(cols[p][0]);
    rep.panels[p].mu2 = summarize(cols[p][1]);
    rep.panels[p].mu = summarize(cols[p][2]);
  }
  rep.welch = welch_t(cols[0][0], cols[0][1], alternative);
  rep.paired = paired_t(cols[0][0], cols[0][1], alternative);
  return rep;
}

}  // namespace polarity
