#pragma once

// Agreement between a generated dictionary and human-made word lists, and
// the out-of-sample prediction benchmark.

#include "polarity/dictionary.hpp"
#include "polarity/pipeline.hpp"
#include "polarity/text_pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace polarity {

enum class ValueKind { binary, continuous };

std::string_view to_string(ValueKind k);

/// A human-made word list. Keys are stems produced by the active pipeline.
struct ReferenceDictionary {
  std::string name;
  std::map<std::string, double> entries;
  ValueKind value_kind = ValueKind::binary;
  Index ties_dropped = 0;  // stems whose surface forms had a tied majority label
};

/// Stems raw (term, value) pairs and collapses duplicate stems. Binary
/// lists (all values +/-1) keep the majority label and drop exact ties;
/// continuous lists average the values.
ReferenceDictionary make_reference(std::string name, const std::vector<std::pair<std::string, double>>& raw,
                                   const PipelineConfig& pipeline);

/// Reads "term,value" lines. Blank lines and lines starting with '#' are
/// skipped, as is a leading "term,value" header. Errors name file and line.
ReferenceDictionary load_reference(const std::filesystem::path& path, const PipelineConfig& pipeline,
                                   std::string name = {});

enum class AlphaMetric { automatic, nominal, interval };

std::string_view to_string(AlphaMetric m);
AlphaMetric alpha_metric_from_string(std::string_view s);

/// Two-rater Krippendorff alpha from the coincidence matrix. Returns 1
/// when every pooled value is identical and the raters agree, nan when
/// fewer than 2 items or expected disagreement is zero otherwise.
double krippendorff_alpha(const std::vector<double>& rater_1, const std::vector<double>& rater_2,
                          AlphaMetric metric);

struct CorrelationResult {
  double r = undefined();
  double p_value = undefined();
};

/// Pearson correlation with a two-sided p-value from t = r sqrt((n-2)/(1-r^2)).
CorrelationResult pearson(const std::vector<double>& a, const std::vector<double>& b);

struct ComparisonReport {
  std::string reference_name;
  Index generated_size = 0;
  Index reference_size = 0;
  Index overlap_count = 0;
  double overlap_share = 0;
  Index consensus_count = 0;
  double consensus_share = 0;
  double pearson_correlation = undefined();
  double correlation_p_value = undefined();
  double krippendorff_alpha = undefined();
  AlphaMetric alpha_metric = AlphaMetric::nominal;
  Index reference_ties_dropped = 0;
};

/// `metric` automatic means nominal on signs for binary references and
/// interval on values for continuous ones.
ComparisonReport compare(const PolarityDictionary& generated, const ReferenceDictionary& reference,
                         AlphaMetric metric = AlphaMetric::automatic);

/// Fixed-width text rendering of comparison rows.
std::string comparison_table(const std::vector<ComparisonReport>& rows);

struct BenchmarkResult {
  Index n_train = 0;
  Index n_test = 0;
  double lasso_mse = undefined();
  Index lasso_terms = 0;
  struct Reference {
    std::string name;
    double mse = undefined();
    double calibration_intercept = 0;
    double calibration_slope = 0;
    Index matched_terms = 0;  // reference stems present in the training vocabulary
  };
  std::vector<Reference> references;
};

/// Net polarity sum_t value_t * tf-idf(t, doc); idf from the given counts.
double net_polarity(const ReferenceDictionary& reference, const std::vector<std::string>& terms,
                    const std::map<std::string, double>& idf);

/// Deterministic train/test split; LASSO dictionary fitted on train and
/// reference net-polarity scores calibrated by train-split OLS. MSE on the
/// response scale over the test split.
BenchmarkResult predictive_benchmark(const std::vector<TokenizedDocument>& docs, const VectorXd& responses,
                                     const std::vector<ReferenceDictionary>& references, const ModelConfig& config,
                                     std::uint64_t split_seed, double test_fraction = 0.2);

}  // namespace polarity
