#pragma once

// Placement of negative information (t-tests on half-document scores) and
// joint significance of word groups (nested-model F-test).

#include "polarity/dictionary.hpp"
#include "polarity/distributions.hpp"
#include "polarity/errors.hpp"
#include "polarity/evaluation.hpp"
#include "polarity/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace polarity {

enum class Alternative { two_sided, less, greater };

std::string_view to_string(Alternative a);
Alternative alternative_from_string(std::string_view s);

struct WelchResult {
  double mean_1 = 0;
  double mean_2 = 0;
  double t_statistic = 0;
  double degrees_of_freedom = 0;
  double p_value = 1;
  Alternative alternative = Alternative::two_sided;
  bool paired = false;
};

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of freedom.
WelchResult welch_t(const std::vector<double>& sample_1, const std::vector<double>& sample_2,
                    Alternative alternative = Alternative::two_sided);

/// One-sample t-test on the differences sample_1[i] - sample_2[i].
WelchResult paired_t(const std::vector<double>& sample_1, const std::vector<double>& sample_2,
                     Alternative alternative = Alternative::two_sided);

struct JointFResult {
  double f_statistic = 0;
  Index df_numerator = 0;
  Index df_denominator = 0;
  double p_value = 1;
  std::vector<Index> tested_terms;  // tested columns that add rank to the restricted model
  double rss_full = 0;
  double rss_restricted = 0;
};

namespace detail {
double p_from_t(double t, double df, Alternative alternative);
}

/// F = [(RSS_r - RSS_f) / q] / [RSS_f / (n - p_f - 1)] for the restricted
/// model full_support minus tested_subset. q counts the tested columns that
/// are linearly independent of the restricted columns.
template <typename DerivedX, typename DerivedY>
JointFResult joint_f_test(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                          std::vector<Index> full_support, std::vector<Index> tested_subset) {
  using Scalar = typename DerivedX::Scalar;
  if (tested_subset.empty()) throw UsageError("joint F-test: the tested subset is empty");
  std::sort(full_support.begin(), full_support.end());
  full_support.erase(std::unique(full_support.begin(), full_support.end()), full_support.end());
  std::sort(tested_subset.begin(), tested_subset.end());
  tested_subset.erase(std::unique(tested_subset.begin(), tested_subset.end()), tested_subset.end());
  if (!std::includes(full_support.begin(), full_support.end(), tested_subset.begin(), tested_subset.end()))
    throw InputError("joint F-test: tested terms must be part of the full support");

  std::vector<Index> restricted;
  std::set_difference(full_support.begin(), full_support.end(), tested_subset.begin(), tested_subset.end(),
                      std::back_inserter(restricted));
  const auto fit_r = ols_fit(X, y, restricted);
  const auto fit_f = ols_fit(X, y, full_support);

  // Which tested columns add rank once the restricted columns are in.
  std::vector<Index> order = fit_r.columns;
  order.insert(order.end(), tested_subset.begin(), tested_subset.end());
  Matrix<Scalar> centered(X.rows(), static_cast<Index>(order.size()));
  for (std::size_t c = 0; c < order.size(); ++c) centered.col(static_cast<Index>(c)) = X.col(order[c]);
  centered.rowwise() -= centered.colwise().mean();
  std::vector<Index> dropped;
  const auto kept = detail::independent_columns(centered, order, dropped);

  JointFResult res;
  for (std::size_t c = fit_r.columns.size(); c < kept.size(); ++c) res.tested_terms.push_back(kept[c]);
  res.df_numerator = static_cast<Index>(fit_f.columns.size()) - static_cast<Index>(fit_r.columns.size());
  res.df_denominator = fit_f.df_residual;
  res.rss_full = static_cast<double>(fit_f.rss);
  res.rss_restricted = static_cast<double>(fit_r.rss);
  if (res.df_numerator < 1)
    throw EstimationError("joint F-test: tested terms are linearly dependent on the remaining terms");
  if (res.rss_full == 0) {
    res.f_statistic = undefined();
    res.p_value = undefined();
    return res;
  }
  const double num = std::max(0.0, res.rss_restricted - res.rss_full) / static_cast<double>(res.df_numerator);
  const double den = res.rss_full / static_cast<double>(res.df_denominator);
  res.f_statistic = num / den;
  res.p_value = fisher_f_sf(res.f_statistic, static_cast<double>(res.df_numerator),
                            static_cast<double>(res.df_denominator));
  return res;
}

struct TermPartition {
  std::vector<std::string> informative;      // present in the reference with either label
  std::vector<std::string> non_informative;  // the rest
  double informative_share = 0;
};

TermPartition partition_by_reference(const PolarityDictionary& dict, const ReferenceDictionary& reference);

struct SummaryStatistics {
  Index n = 0;
  double mean = undefined();
  double min = undefined();
  double q25 = undefined();
  double median = undefined();
  double q75 = undefined();
  double max = undefined();
  double sd = undefined();
  double skewness = undefined();  // m3 / m2^1.5
  double kurtosis = undefined();  // m4 / m2^2 - 3
};

/// Quantiles interpolate between order statistics (h = (n-1)p).
double quantile(std::vector<double> values, double p);

SummaryStatistics summarize(const std::vector<double>& values);

struct PlacementPanel {
  std::string name;  // "all", "positive", "negative"
  SummaryStatistics mu1;
  SummaryStatistics mu2;
  SummaryStatistics mu;
};

struct PlacementReport {
  std::array<PlacementPanel, 3> panels;
  WelchResult welch;   // mu1 vs mu2, unpaired
  WelchResult paired;  // mu1 - mu2 per document
  double class_threshold = 0;
};

/// Summary panels over all documents and split by response > threshold,
/// plus the Welch and paired tests of mu1 against mu2.
PlacementReport placement_test(const std::vector<HalfScores>& halves, const std::vector<double>& responses,
                               double class_threshold, Alternative alternative = Alternative::two_sided);

}  // namespace polarity
