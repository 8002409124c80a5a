#pragma once

#include "polarity/dtm.hpp"
#include "polarity/inference.hpp"
#include "polarity/lasso.hpp"
#include "polarity/text_pipeline.hpp"
#include "polarity/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polarity {

/// How documents are split into positive/negative for the share columns.
enum class ClassThreshold { median, zero };

std::string_view to_string(ClassThreshold c);
ClassThreshold class_threshold_from_string(std::string_view s);

struct DictionaryEntry {
  std::string term;
  double coefficient = 0;
  double standard_error = 0;  // Post-LASSO; nan if the term was rank-dropped
  double t_statistic = 0;
  double relative_doc_frequency = 0;
  double pos_share = 0;
  double neg_share = 0;
  double term_mean = 0;  // weighted-column constants used for scoring
  double term_sd = 1;
  double term_idf = 1;
};

struct DictionaryMetadata {
  double intercept = 0;
  double lambda = 0;
  double adjusted_r2 = undefined();
  Index n_documents = 0;
  Index n_candidate_terms = 0;
  Index n_positive = 0;
  Index n_negative = 0;
  Weighting weighting = Weighting::tfidf;
  double response_mean = 0;
  double response_sd = 1;
  ClassThreshold class_rule = ClassThreshold::median;
  double class_threshold = 0;  // response value separating the classes
  PipelineConfig pipeline;
  std::vector<std::string> rank_dropped_terms;

  friend bool operator==(const DictionaryMetadata&, const DictionaryMetadata&) = default;
};

struct PolarityDictionary {
  std::vector<DictionaryEntry> entries;  // coefficient descending
  DictionaryMetadata metadata;

  const DictionaryEntry* find(std::string_view term) const;
};

struct DocumentScore {
  std::string doc_id;
  double score = 0;
  std::vector<std::pair<std::string, double>> contributing_terms;
};

struct HalfScores {
  double mu1 = 0;
  double mu2 = 0;
  double mu = 0;
};

struct DictionaryInputs {
  const LassoPath<double>& path;
  const PostLassoResult<double>* post;  // null when the active set is empty
  const DocumentTermMatrix& weighted;   // matrix the columns were standardized from
  const StandardizedMatrix& regressors;
  const ResponseVector& raw_response;
  const ResponseVector& standardized_response;
  PipelineConfig pipeline;
  ClassThreshold class_rule = ClassThreshold::median;
};

/// Packages the selected LASSO fit as a dictionary; `warnings` receives a
/// note when the active set is empty.
PolarityDictionary build_dictionary(const DictionaryInputs& in, std::vector<std::string>* warnings = nullptr);

/// Response value separating positive from negative documents.
double class_threshold_value(const VectorXd& response, ClassThreshold rule);

/// Median with averaging of the two middle values.
double median(std::vector<double> values);

/// intercept + sum_t coef_t * (count_t * idf_t - mean_t) / sd_t.
DocumentScore score_document(const PolarityDictionary& dict, const std::vector<std::string>& terms,
                             std::string doc_id = {});

/// Intercept-free contribution sums for the first half, second half and the
/// whole document.
HalfScores score_halves(const PolarityDictionary& dict, const TokenizedDocument& doc);

/// Intercept-free contribution sum over raw counts (no standardization
/// offsets): sum_t coef_t * count_t * idf_t / sd_t.
double raw_contribution(const PolarityDictionary& dict, const std::vector<std::string>& terms);

/// Writes `<path>` (CSV) and `<path with .json extension>` (metadata).
void save(const PolarityDictionary& dict, const std::filesystem::path& csv_path);
PolarityDictionary load(const std::filesystem::path& csv_path);

std::filesystem::path metadata_path(const std::filesystem::path& csv_path);

std::string dictionary_csv(const PolarityDictionary& dict);
std::string dictionary_metadata_json(const PolarityDictionary& dict);

inline constexpr std::string_view kDictionaryHeader =
    "term,coefficient,std_error,t_stat,rel_doc_freq,pos_share,neg_share,term_mean,term_sd,term_idf";

}  // namespace polarity
