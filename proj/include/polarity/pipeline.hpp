#pragma once

// End-to-end model construction: tokenized corpus + response -> dictionary.

#include "polarity/dictionary.hpp"
#include "polarity/dtm.hpp"
#include "polarity/inference.hpp"
#include "polarity/lasso.hpp"
#include "polarity/text_pipeline.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polarity {

struct Document {
  std::string id;
  std::string text;
  double response = 0;
};

struct LassoSettings {
  Index n_folds = 10;
  int grid_points = 100;
  double grid_ratio = 0.001;
  double tol = 1e-7;
  int max_iter = 10000;
  SelectionRule selection_rule = SelectionRule::min;
  std::uint64_t fold_seed = 20170508;

  friend bool operator==(const LassoSettings&, const LassoSettings&) = default;
};

struct ModelConfig {
  PipelineConfig pipeline = PipelineConfig::english();
  Weighting weighting = Weighting::tfidf;
  std::optional<Index> min_doc_frequency;  // default: 1% of documents, rounded up
  LassoSettings lasso;
  ClassThreshold class_rule = ClassThreshold::median;
  int threads = 1;
  bool strict = false;  // non-convergence becomes a NumericalError
};

struct ModelRun {
  DocumentTermMatrix counts;
  DocumentTermMatrix weighted;
  StandardizedMatrix regressors;
  ResponseVector raw_response;
  ResponseVector response;
  LassoPath<double> path;
  std::optional<PostLassoResult<double>> post;
  PolarityDictionary dictionary;
  Index min_doc_frequency = 1;
  Index non_converged_fits = 0;
  std::vector<std::string> warnings;
};

std::vector<TokenizedDocument> tokenize_corpus(const std::vector<Document>& corpus, const PipelineConfig& config);

/// Matrix, tf-idf, standardization, cross-validated LASSO, Post-LASSO and
/// dictionary packaging. `responses` is aligned with `docs`.
ModelRun build_model(const std::vector<TokenizedDocument>& docs, const VectorXd& responses,
                     const ModelConfig& config);

ModelRun build_model(const std::vector<Document>& corpus, const ModelConfig& config);

}  // namespace polarity
