#include "polarity/dtm.hpp"

#include "polarity/errors.hpp"
#include "polarity/format.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace polarity {
namespace {

std::vector<ColumnStats> sparse_column_stats(const SparseMatrix& m) {
  const double n = static_cast<double>(m.rows());
  std::vector<ColumnStats> stats(static_cast<std::size_t>(m.cols()));
  for (Index j = 0; j < m.cols(); ++j) {
    double sum = 0.0;
    Index nnz = 0;
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
      sum += it.value();
      ++nnz;
    }
    const double mean = sum / n;
    double ss = static_cast<double>(m.rows() - nnz) * mean * mean;
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) ss += (it.value() - mean) * (it.value() - mean);
    auto& s = stats[static_cast<std::size_t>(j)];
    s.document_frequency = nnz;
    s.mean = mean;
    s.std_dev = m.rows() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return stats;
}

}  // namespace

std::string_view to_string(Weighting w) {
  return w == Weighting::tfidf ? "tfidf" : "raw_tf";
}

Weighting weighting_from_string(std::string_view s) {
  if (s == "tfidf") return Weighting::tfidf;
  if (s == "raw_tf") return Weighting::raw_tf;
  throw ConfigError("unknown weighting '" + std::string(s) + "'");
}

Index default_min_doc_frequency(Index n_documents) {
  return std::max<Index>(1, (n_documents + 99) / 100);
}

DocumentTermMatrix build_matrix(const std::vector<TokenizedDocument>& docs, Index min_doc_frequency) {
  if (docs.size() < 2) throw InvalidCorpus("a document-term matrix needs at least 2 documents");
  if (min_doc_frequency < 1) throw ConfigError("min_doc_frequency must be >= 1");

  std::vector<std::unordered_map<std::string, double>> counts(docs.size());
  std::map<std::string, Index> df;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (auto& term : docs[d].terms()) counts[d][term] += 1.0;
    for (const auto& [term, c] : counts[d]) ++df[term];
  }

  DocumentTermMatrix m;
  m.weighting = Weighting::raw_tf;
  m.doc_ids.reserve(docs.size());
  for (const auto& doc : docs) m.doc_ids.push_back(doc.doc_id);

  std::unordered_map<std::string, Index> column;
  for (const auto& [term, f] : df) {
    if (f < min_doc_frequency) continue;
    column.emplace(term, static_cast<Index>(m.vocabulary.size()));
    m.vocabulary.push_back(term);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t d = 0; d < docs.size(); ++d)
    for (const auto& [term, c] : counts[d])
      if (auto it = column.find(term); it != column.end())
        triplets.emplace_back(static_cast<Index>(d), it->second, c);

  m.entries.resize(static_cast<Index>(docs.size()), m.n_terms());
  m.entries.setFromTriplets(triplets.begin(), triplets.end());
  m.entries.makeCompressed();
  m.column_stats = sparse_column_stats(m.entries);
  m.idf.assign(m.vocabulary.size(), 1.0);
  return m;
}

DocumentTermMatrix apply_tfidf(const DocumentTermMatrix& m) {
  if (m.weighting != Weighting::raw_tf) throw InvalidState("matrix is already tf-idf weighted");

  const double n_docs = static_cast<double>(m.n_documents());
  DocumentTermMatrix out;
  out.weighting = Weighting::tfidf;
  out.doc_ids = m.doc_ids;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m.entries.nonZeros()));
  for (Index j = 0; j < m.n_terms(); ++j) {
    const Index df = m.column_stats[static_cast<std::size_t>(j)].document_frequency;
    if (df == m.n_documents()) continue;  // log(1) = 0 everywhere
    const double idf = std::log(n_docs / static_cast<double>(df));
    const Index col = out.n_terms();
    out.vocabulary.push_back(m.vocabulary[static_cast<std::size_t>(j)]);
    out.idf.push_back(idf);
    for (SparseMatrix::InnerIterator it(m.entries, j); it; ++it)
      triplets.emplace_back(it.row(), col, it.value() * idf);
  }
  out.entries.resize(m.n_documents(), out.n_terms());
  out.entries.setFromTriplets(triplets.begin(), triplets.end());
  out.entries.makeCompressed();
  out.column_stats = sparse_column_stats(out.entries);
  return out;
}

StandardizedMatrix standardize(const DocumentTermMatrix& m) {
  const Index n = m.n_documents();
  StandardizedMatrix out;
  out.doc_ids = m.doc_ids;
  out.weighting = m.weighting;

  std::vector<Index> kept;
  for (Index j = 0; j < m.n_terms(); ++j) {
    if (m.column_stats[static_cast<std::size_t>(j)].std_dev > 0.0)
      kept.push_back(j);
    else
      out.dropped_terms.push_back(m.vocabulary[static_cast<std::size_t>(j)]);
  }

  out.values.setZero(n, static_cast<Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const Index j = kept[c];
    auto col = out.values.col(static_cast<Index>(c));
    for (SparseMatrix::InnerIterator it(m.entries, j); it; ++it) col(it.row()) = it.value();
    // Two-pass on the dense column so the stored constants are the ones applied.
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(n - 1));
    if (!(sd > 0.0)) {
      out.dropped_terms.push_back(m.vocabulary[static_cast<std::size_t>(j)]);
      col.setZero();
      continue;
    }
    col = (col.array() - mean) / sd;
    ColumnStats s = m.column_stats[static_cast<std::size_t>(j)];
    s.mean = mean;
    s.std_dev = sd;
    out.vocabulary.push_back(m.vocabulary[static_cast<std::size_t>(j)]);
    out.column_stats.push_back(s);
    out.idf.push_back(m.idf[static_cast<std::size_t>(j)]);
  }
  // Compact away any columns zeroed by the second check.
  if (static_cast<Index>(out.vocabulary.size()) != out.values.cols()) {
    MatrixXd compact(n, static_cast<Index>(out.vocabulary.size()));
    Index c = 0;
    for (Index j = 0; j < out.values.cols(); ++j)
      if (!out.values.col(j).isZero(0.0)) compact.col(c++) = out.values.col(j);
    out.values = std::move(compact);
  }
  return out;
}

ResponseVector standardize_response(const ResponseVector& y) {
  if (y.standardized) throw InvalidState("response is already standardized");
  const Index n = y.values.size();
  if (n < 2) throw InputError("response needs at least 2 values");
  if (!y.values.allFinite()) throw InputError("response contains non-finite values");
  ResponseVector out;
  out.mean = y.values.mean();
  out.std_dev = std::sqrt((y.values.array() - out.mean).square().sum() / static_cast<double>(n - 1));
  if (!(out.std_dev > 0.0)) throw InputError("response has zero variance");
  out.values = (y.values.array() - out.mean) / out.std_dev;
  out.standardized = true;
  return out;
}

std::string triplets_csv(const DocumentTermMatrix& m) {
  // Row-major order: documents in corpus order, terms in vocabulary order.
  const Eigen::SparseMatrix<double, Eigen::RowMajor> rows = m.entries;
  std::string out = "doc_id,term,weight\n";
  for (Index d = 0; d < rows.outerSize(); ++d) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows, d); it; ++it) {
      out += m.doc_ids[static_cast<std::size_t>(d)];
      out += ',';
      out += m.vocabulary[static_cast<std::size_t>(it.col())];
      out += ',';
      out += format_double(it.value());
      out += '\n';
    }
  }
  return out;
}

void write_triplets(const DocumentTermMatrix& m, const std::filesystem::path& triplets,
                    const std::filesystem::path& vocabulary) {
  write_file(triplets, triplets_csv(m));
  std::string vocab = "term,document_frequency,idf\n";
  for (std::size_t j = 0; j < m.vocabulary.size(); ++j) {
    vocab += m.vocabulary[j];
    vocab += ',';
    vocab += std::to_string(m.column_stats[j].document_frequency);
    vocab += ',';
    vocab += format_double(m.idf[j]);
    vocab += '\n';
  }
  write_file(vocabulary, vocab);
}

}  // namespace polarity
