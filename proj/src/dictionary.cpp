#include "polarity/dictionary.hpp"

#include "polarity/errors.hpp"
#include "polarity/format.hpp"
#include "polarity/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace polarity {
namespace {

std::unordered_map<std::string, double> count_terms(const std::vector<std::string>& terms) {
  std::unordered_map<std::string, double> counts;
  for (const auto& t : terms) counts[t] += 1.0;
  return counts;
}

double standardized_value(const DictionaryEntry& e, double count) {
  return (count * e.term_idf - e.term_mean) / e.term_sd;
}

double contribution_sum(const PolarityDictionary& dict, const std::unordered_map<std::string, double>& counts) {
  double sum = 0;
  for (const auto& e : dict.entries) {
    const auto it = counts.find(e.term);
    sum += e.coefficient * standardized_value(e, it == counts.end() ? 0.0 : it->second);
  }
  return sum;
}

constexpr std::string_view kFormatName = "polarity-dictionary";
constexpr int kFormatVersion = 1;

}  // namespace

std::string_view to_string(ClassThreshold c) { return c == ClassThreshold::zero ? "zero" : "median"; }

ClassThreshold class_threshold_from_string(std::string_view s) {
  if (s == "median") return ClassThreshold::median;
  if (s == "zero") return ClassThreshold::zero;
  throw ConfigError("unknown class threshold '" + std::string(s) + "'");
}

double median(std::vector<double> values) {
  if (values.empty()) return undefined();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return lower + (upper - lower) / 2;
}

double class_threshold_value(const VectorXd& response, ClassThreshold rule) {
  if (rule == ClassThreshold::zero) return 0.0;
  return median(std::vector<double>(response.data(), response.data() + response.size()));
}

const DictionaryEntry* PolarityDictionary::find(std::string_view term) const {
  for (const auto& e : entries)
    if (e.term == term) return &e;
  return nullptr;
}

PolarityDictionary build_dictionary(const DictionaryInputs& in, std::vector<std::string>* warnings) {
  const auto& fit = in.path.selected();
  const auto& X = in.regressors;
  const Index n = X.n_documents();

  PolarityDictionary dict;
  auto& meta = dict.metadata;
  meta.intercept = fit.intercept;
  meta.lambda = fit.lambda;
  meta.n_documents = n;
  meta.n_candidate_terms = X.n_terms();
  meta.weighting = X.weighting;
  meta.response_mean = in.standardized_response.mean;
  meta.response_sd = in.standardized_response.std_dev;
  meta.class_rule = in.class_rule;
  meta.class_threshold = class_threshold_value(in.raw_response.values, in.class_rule);
  meta.pipeline = in.pipeline;

  if (fit.active_set.empty()) {
    if (warnings) warnings->push_back("selected lambda yields an empty active set; dictionary has no entries");
    return dict;
  }
  if (!in.post) throw InvalidState("build_dictionary: Post-LASSO result missing for a non-empty active set");
  meta.adjusted_r2 = in.post->adjusted_r2;

  std::unordered_map<Index, Index> post_index;
  for (std::size_t k = 0; k < in.post->support.size(); ++k) post_index[in.post->support[k]] = static_cast<Index>(k);
  std::unordered_map<std::string, Index> weighted_column;
  for (std::size_t j = 0; j < in.weighted.vocabulary.size(); ++j)
    weighted_column[in.weighted.vocabulary[j]] = static_cast<Index>(j);

  for (Index j : fit.active_set) {
    DictionaryEntry e;
    e.term = X.vocabulary[static_cast<std::size_t>(j)];
    e.coefficient = fit.coefficients(j);
    if (auto it = post_index.find(j); it != post_index.end()) {
      e.standard_error = in.post->standard_errors(it->second);
      e.t_statistic = in.post->t_statistics(it->second);
    } else {
      e.standard_error = undefined();
      e.t_statistic = undefined();
      if (!in.post->support.empty()) meta.rank_dropped_terms.push_back(e.term);
    }
    const auto& stats = X.column_stats[static_cast<std::size_t>(j)];
    e.term_mean = stats.mean;
    e.term_sd = stats.std_dev;
    e.term_idf = X.idf[static_cast<std::size_t>(j)];
    e.relative_doc_frequency = static_cast<double>(stats.document_frequency) / static_cast<double>(n);

    Index pos = 0, total = 0;
    const auto col = weighted_column.at(e.term);
    for (SparseMatrix::InnerIterator it(in.weighted.entries, col); it; ++it) {
      ++total;
      if (in.raw_response.values(it.row()) > meta.class_threshold) ++pos;
    }
    e.pos_share = total > 0 ? static_cast<double>(pos) / static_cast<double>(total) : 0.0;
    e.neg_share = total > 0 ? static_cast<double>(total - pos) / static_cast<double>(total) : 0.0;

    if (e.coefficient > 0)
      ++meta.n_positive;
    else
      ++meta.n_negative;
    dict.entries.push_back(std::move(e));
  }
  std::sort(meta.rank_dropped_terms.begin(), meta.rank_dropped_terms.end());
  std::stable_sort(dict.entries.begin(), dict.entries.end(), [](const auto& a, const auto& b) {
    if (a.coefficient != b.coefficient) return a.coefficient > b.coefficient;
    return a.term < b.term;
  });
  return dict;
}

DocumentScore score_document(const PolarityDictionary& dict, const std::vector<std::string>& terms,
                             std::string doc_id) {
  const auto counts = count_terms(terms);
  DocumentScore s;
  s.doc_id = std::move(doc_id);
  s.score = dict.metadata.intercept;
  s.contributing_terms.reserve(dict.entries.size());
  for (const auto& e : dict.entries) {
    const auto it = counts.find(e.term);
    const double c = e.coefficient * standardized_value(e, it == counts.end() ? 0.0 : it->second);
    s.contributing_terms.emplace_back(e.term, c);
    s.score += c;
  }
  return s;
}

HalfScores score_halves(const PolarityDictionary& dict, const TokenizedDocument& doc) {
  auto [first, second] = split_halves(doc);
  HalfScores h;
  h.mu1 = contribution_sum(dict, count_terms(ngrams(first, doc.ngram_orders)));
  h.mu2 = contribution_sum(dict, count_terms(ngrams(second, doc.ngram_orders)));
  h.mu = contribution_sum(dict, count_terms(doc.terms()));
  return h;
}

double raw_contribution(const PolarityDictionary& dict, const std::vector<std::string>& terms) {
  const auto counts = count_terms(terms);
  double sum = 0;
  for (const auto& e : dict.entries)
    if (auto it = counts.find(e.term); it != counts.end()) sum += e.coefficient * it->second * e.term_idf / e.term_sd;
  return sum;
}

std::filesystem::path metadata_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

std::string dictionary_csv(const PolarityDictionary& dict) {
  std::string out(kDictionaryHeader);
  out += '\n';
  for (const auto& e : dict.entries) {
    out += e.term;
    for (double v : {e.coefficient, e.standard_error, e.t_statistic, e.relative_doc_frequency, e.pos_share,
                     e.neg_share, e.term_mean, e.term_sd, e.term_idf}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string dictionary_metadata_json(const PolarityDictionary& dict) {
  const auto& m = dict.metadata;
  Json j;
  j["format"] = std::string(kFormatName);
  j["version"] = kFormatVersion;
  j["intercept"] = number_to_json(m.intercept);
  j["lambda"] = number_to_json(m.lambda);
  j["adjusted_r2"] = number_to_json(m.adjusted_r2);
  j["n_documents"] = m.n_documents;
  j["n_candidate_terms"] = m.n_candidate_terms;
  j["n_entries"] = dict.entries.size();
  j["n_positive"] = m.n_positive;
  j["n_negative"] = m.n_negative;
  j["weighting"] = std::string(to_string(m.weighting));
  j["response_mean"] = number_to_json(m.response_mean);
  j["response_sd"] = number_to_json(m.response_sd);
  j["class_rule"] = std::string(to_string(m.class_rule));
  j["class_threshold"] = number_to_json(m.class_threshold);
  j["pipeline"] = pipeline_to_json(m.pipeline);
  j["rank_dropped_terms"] = m.rank_dropped_terms;
  return dump_canonical(j);
}

void save(const PolarityDictionary& dict, const std::filesystem::path& csv_path) {
  write_file(csv_path, dictionary_csv(dict));
  write_file(metadata_path(csv_path), dictionary_metadata_json(dict));
}

PolarityDictionary load(const std::filesystem::path& csv_path) {
  const std::string source = csv_path.string();
  PolarityDictionary dict;

  std::istringstream csv(read_file(csv_path));
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(csv, line)) throw ParseError(source, 1, "missing header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kDictionaryHeader)
    throw ParseError(source, line_no, "unexpected header; expected '" + std::string(kDictionaryHeader) + "'");

  std::unordered_set<std::string> seen;
  static const char* kFields[] = {"coefficient", "std_error", "t_stat",   "rel_doc_freq", "pos_share",
                                  "neg_share",   "term_mean", "term_sd",  "term_idf"};
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 10)
      throw ParseError(source, line_no, "expected 10 fields, found " + std::to_string(fields.size()));
    DictionaryEntry e;
    e.term = fields[0];
    if (e.term.empty()) throw ParseError(source, line_no, "empty term");
    if (!seen.insert(e.term).second) throw ParseError(source, line_no, "duplicate term '" + e.term + "'");
    double* targets[] = {&e.coefficient, &e.standard_error, &e.t_statistic, &e.relative_doc_frequency,
                         &e.pos_share,   &e.neg_share,      &e.term_mean,   &e.term_sd,
                         &e.term_idf};
    for (std::size_t f = 0; f < 9; ++f)
      if (!parse_double(fields[f + 1], *targets[f]))
        throw ParseError(source, line_no, std::string("field '") + kFields[f] + "' is not a number: '" +
                                              fields[f + 1] + "'");
    if (!(e.term_sd > 0)) throw ParseError(source, line_no, "term_sd must be positive for '" + e.term + "'");
    dict.entries.push_back(std::move(e));
  }

  const auto meta_path = metadata_path(csv_path);
  Json j;
  try {
    j = Json::parse(read_file(meta_path));
  } catch (const Json::parse_error& e) {
    throw ParseError(meta_path.string(), 0, e.what());
  }
  static const std::set<std::string> known = {
      "format",       "version",         "intercept",  "lambda",     "adjusted_r2",     "n_documents",
      "n_candidate_terms", "n_entries",  "n_positive", "n_negative", "weighting",       "response_mean",
      "response_sd",  "class_rule",      "class_threshold", "pipeline", "rank_dropped_terms"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ParseError(meta_path.string(), 0, "unknown key '" + key + "'");
  try {
    if (j.at("format").get<std::string>() != kFormatName || j.at("version").get<int>() != kFormatVersion)
      throw ParseError(meta_path.string(), 0, "unsupported dictionary format");
    auto& m = dict.metadata;
    m.intercept = number_from_json(j.at("intercept"));
    m.lambda = number_from_json(j.at("lambda"));
    m.adjusted_r2 = number_from_json(j.at("adjusted_r2"));
    m.n_documents = j.at("n_documents").get<Index>();
    m.n_candidate_terms = j.at("n_candidate_terms").get<Index>();
    m.n_positive = j.at("n_positive").get<Index>();
    m.n_negative = j.at("n_negative").get<Index>();
    m.weighting = weighting_from_string(j.at("weighting").get<std::string>());
    m.response_mean = number_from_json(j.at("response_mean"));
    m.response_sd = number_from_json(j.at("response_sd"));
    m.class_rule = class_threshold_from_string(j.at("class_rule").get<std::string>());
    m.class_threshold = number_from_json(j.at("class_threshold"));
    m.pipeline = pipeline_from_json(j.at("pipeline"));
    m.rank_dropped_terms = j.at("rank_dropped_terms").get<std::vector<std::string>>();
    if (j.at("n_entries").get<std::size_t>() != dict.entries.size())
      throw ParseError(meta_path.string(), 0, "n_entries does not match the CSV row count");
  } catch (const Json::exception& e) {
    throw ParseError(meta_path.string(), 0, e.what());
  } catch (const ConfigError& e) {
    throw ParseError(meta_path.string(), 0, e.what());
  }
  return dict;
}

}  // namespace polarity
