#pragma once

#include "polarity/text_pipeline.hpp"
#include "polarity/types.hpp"

#include <Eigen/SparseCore>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace polarity {

enum class Weighting { raw_tf, tfidf };

std::string_view to_string(Weighting w);
Weighting weighting_from_string(std::string_view s);

struct ColumnStats {
  Index document_frequency = 0;
  double mean = 0.0;
  double std_dev = 0.0;  // sample (n - 1) standard deviation
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

/// Sparse (document x term) weights. Columns are aligned with `vocabulary`,
/// rows with `doc_ids`. No stored zeros; every term occurs somewhere.
struct DocumentTermMatrix {
  std::vector<std::string> doc_ids;
  std::vector<std::string> vocabulary;
  SparseMatrix entries;
  std::vector<ColumnStats> column_stats;
  std::vector<double> idf;  // 1 for every term under raw_tf
  Weighting weighting = Weighting::raw_tf;

  Index n_documents() const { return static_cast<Index>(doc_ids.size()); }
  Index n_terms() const { return static_cast<Index>(vocabulary.size()); }
};

/// Dense column-standardized regressors. `column_stats` hold the weighted
/// column mean and sd that were removed, so new documents can be mapped
/// onto the same scale.
struct StandardizedMatrix {
  std::vector<std::string> doc_ids;
  std::vector<std::string> vocabulary;
  MatrixXd values;
  std::vector<ColumnStats> column_stats;
  std::vector<double> idf;
  Weighting weighting = Weighting::raw_tf;
  std::vector<std::string> dropped_terms;  // zero-variance columns

  Index n_documents() const { return values.rows(); }
  Index n_terms() const { return values.cols(); }
};

struct ResponseVector {
  VectorXd values;
  bool standardized = false;
  double mean = 0.0;     // constants removed by standardization
  double std_dev = 1.0;
};

/// Raw term counts; keeps terms occurring in at least `min_doc_frequency`
/// documents, sorted lexicographically.
DocumentTermMatrix build_matrix(const std::vector<TokenizedDocument>& docs, Index min_doc_frequency);

/// x_dt * ln(|D| / df_t). Terms present in every document vanish and are
/// removed from the vocabulary.
DocumentTermMatrix apply_tfidf(const DocumentTermMatrix& m);

StandardizedMatrix standardize(const DocumentTermMatrix& m);

ResponseVector standardize_response(const ResponseVector& y);

/// 1% of the corpus, rounded up.
Index default_min_doc_frequency(Index n_documents);

/// Sparse triplets `doc_id,term,weight` and a `term,document_frequency,idf`
/// sidecar, both in canonical order.
void write_triplets(const DocumentTermMatrix& m, const std::filesystem::path& triplets,
                    const std::filesystem::path& vocabulary);

std::string triplets_csv(const DocumentTermMatrix& m);

}  // namespace polarity
