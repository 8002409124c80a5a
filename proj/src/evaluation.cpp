#include "polarity/evaluation.hpp"

#include "polarity/distributions.hpp"
#include "polarity/errors.hpp"
#include "polarity/format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace polarity {
namespace {

int sign(double v) { return (v > 0) - (v < 0); }

double mse(const VectorXd& predicted, const VectorXd& actual) { return (predicted - actual).squaredNorm() / actual.size(); }

std::unordered_map<std::string, double> count_terms(const std::vector<std::string>& terms) {
  std::unordered_map<std::string, double> counts;
  for (const auto& t : terms) counts[t] += 1.0;
  return counts;
}

}  // namespace

std::string_view to_string(ValueKind k) { return k == ValueKind::binary ? "binary" : "continuous"; }

std::string_view to_string(AlphaMetric m) {
  switch (m) {
    case AlphaMetric::nominal:
      return "nominal";
    case AlphaMetric::interval:
      return "interval";
    default:
      return "automatic";
  }
}

AlphaMetric alpha_metric_from_string(std::string_view s) {
  if (s == "automatic" || s == "auto") return AlphaMetric::automatic;
  if (s == "nominal") return AlphaMetric::nominal;
  if (s == "interval") return AlphaMetric::interval;
  throw ConfigError("unknown alpha metric '" + std::string(s) + "'");
}

ReferenceDictionary make_reference(std::string name, const std::vector<std::pair<std::string, double>>& raw,
                                   const PipelineConfig& pipeline) {
  ReferenceDictionary ref;
  ref.name = std::move(name);
  const bool binary =
      std::all_of(raw.begin(), raw.end(), [](const auto& e) { return e.second == 1.0 || e.second == -1.0; });
  ref.value_kind = binary ? ValueKind::binary : ValueKind::continuous;

  std::map<std::string, std::pair<double, Index>> grouped;  // stem -> (sum, count)
  for (const auto& [term, value] : raw) {
    if (!std::isfinite(value) || value < -1 || value > 1)
      throw InputError("reference '" + ref.name + "': value for '" + term + "' outside [-1, 1]");
    const auto stem = normalize_term(term, pipeline);
    if (stem.empty()) continue;
    auto& g = grouped[stem];
    g.first += value;
    ++g.second;
  }
  for (const auto& [stem, g] : grouped) {
    if (binary) {
      if (g.first == 0) {
        ++ref.ties_dropped;
        continue;
      }
      ref.entries.emplace(stem, g.first > 0 ? 1.0 : -1.0);
    } else {
      ref.entries.emplace(stem, g.first / static_cast<double>(g.second));
    }
  }
  return ref;
}

ReferenceDictionary load_reference(const std::filesystem::path& path, const PipelineConfig& pipeline,
                                   std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open reference dictionary " + path.string());
  if (name.empty()) name = path.stem().string();
  const std::string source = path.string();

  std::vector<std::pair<std::string, double>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line_no == 1 && line == "term,value") continue;
    if (!is_valid_utf8(line)) throw ParseError(source, line_no, "invalid UTF-8");
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw ParseError(source, line_no, "expected 'term,value'");
    double value = 0;
    if (!parse_double(fields[1], value)) throw ParseError(source, line_no, "value '" + fields[1] + "' is not a number");
    if (!std::isfinite(value) || value < -1 || value > 1)
      throw ParseError(source, line_no, "value '" + fields[1] + "' outside [-1, 1]");
    if (fields[0].empty()) throw ParseError(source, line_no, "empty term");
    raw.emplace_back(fields[0], value);
  }
  if (raw.empty()) throw InputError("reference dictionary " + source + " has no entries");
  return make_reference(std::move(name), raw, pipeline);
}

double krippendorff_alpha(const std::vector<double>& rater_1, const std::vector<double>& rater_2,
                          AlphaMetric metric) {
  if (rater_1.size() != rater_2.size()) throw InputError("krippendorff_alpha: raters have different lengths");
  if (rater_1.size() < 2) return undefined();
  if (metric == AlphaMetric::automatic) metric = AlphaMetric::nominal;

  // Distinct values and the coincidence matrix; each unit contributes both
  // ordered pairs with weight 1/(m_u - 1) = 1.
  std::vector<double> values(rater_1);
  values.insert(values.end(), rater_2.begin(), rater_2.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const auto index_of = [&](double v) {
    return static_cast<Index>(std::lower_bound(values.begin(), values.end(), v) - values.begin());
  };
  const Index v = static_cast<Index>(values.size());
  MatrixXd o = MatrixXd::Zero(v, v);
  for (std::size_t u = 0; u < rater_1.size(); ++u) {
    const Index a = index_of(rater_1[u]);
    const Index b = index_of(rater_2[u]);
    o(a, b) += 1;
    o(b, a) += 1;
  }
  const VectorXd n_c = o.rowwise().sum();
  const double n = n_c.sum();

  const auto delta = [&](Index c, Index k) {
    if (metric == AlphaMetric::nominal) return c == k ? 0.0 : 1.0;
    const double d = values[static_cast<std::size_t>(c)] - values[static_cast<std::size_t>(k)];
    return d * d;
  };
  double observed = 0, expected = 0;
  for (Index c = 0; c < v; ++c)
    for (Index k = 0; k < v; ++k) {
      const double d = delta(c, k);
      observed += o(c, k) * d;
      expected += n_c(c) * n_c(k) * d;
    }
  if (expected == 0) return observed == 0 ? 1.0 : undefined();
  return 1.0 - (n - 1) * observed / expected;
}

CorrelationResult pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InputError("pearson: inputs have different lengths");
  CorrelationResult res;
  const std::size_t n = a.size();
  if (n < 2) return res;
  const Eigen::Map<const VectorXd> x(a.data(), static_cast<Index>(n));
  const Eigen::Map<const VectorXd> y(b.data(), static_cast<Index>(n));
  const VectorXd xc = x.array() - x.mean();
  const VectorXd yc = y.array() - y.mean();
  const double sxx = xc.squaredNorm(), syy = yc.squaredNorm();
  if (sxx == 0 || syy == 0) return res;
  res.r = std::clamp(xc.dot(yc) / std::sqrt(sxx * syy), -1.0, 1.0);
  if (n < 3) return res;
  const double df = static_cast<double>(n - 2);
  if (std::abs(res.r) == 1.0) {
    res.p_value = 0.0;
  } else {
    const double t = res.r * std::sqrt(df / (1 - res.r * res.r));
    res.p_value = student_t_two_sided(t, df);
  }
  return res;
}

ComparisonReport compare(const PolarityDictionary& generated, const ReferenceDictionary& reference,
                         AlphaMetric metric) {
  if (generated.entries.empty()) throw InputError("compare: generated dictionary is empty");
  if (reference.entries.empty()) throw InputError("compare: reference dictionary '" + reference.name + "' is empty");

  ComparisonReport rep;
  rep.reference_name = reference.name;
  rep.generated_size = static_cast<Index>(generated.entries.size());
  rep.reference_size = static_cast<Index>(reference.entries.size());
  rep.reference_ties_dropped = reference.ties_dropped;
  if (metric == AlphaMetric::automatic)
    metric = reference.value_kind == ValueKind::binary ? AlphaMetric::nominal : AlphaMetric::interval;
  rep.alpha_metric = metric;

  std::vector<double> coef, ref;
  for (const auto& e : generated.entries) {
    const auto it = reference.entries.find(e.term);
    if (it == reference.entries.end()) continue;
    coef.push_back(e.coefficient);
    ref.push_back(it->second);
    if (sign(e.coefficient) == sign(it->second)) ++rep.consensus_count;
  }
  rep.overlap_count = static_cast<Index>(coef.size());
  rep.overlap_share = static_cast<double>(rep.overlap_count) / static_cast<double>(rep.generated_size);
  rep.consensus_share =
      rep.overlap_count > 0 ? static_cast<double>(rep.consensus_count) / static_cast<double>(rep.overlap_count) : 0.0;

  if (rep.overlap_count >= 2) {
    const auto corr = pearson(coef, ref);
    rep.pearson_correlation = corr.r;
    rep.correlation_p_value = corr.p_value;
    if (metric == AlphaMetric::nominal) {
      std::vector<double> s1, s2;
      for (std::size_t i = 0; i < coef.size(); ++i) {
        s1.push_back(sign(coef[i]));
        s2.push_back(sign(ref[i]));
      }
      rep.krippendorff_alpha = krippendorff_alpha(s1, s2, AlphaMetric::nominal);
    } else {
      rep.krippendorff_alpha = krippendorff_alpha(coef, ref, AlphaMetric::interval);
    }
  }
  return rep;
}

std::string comparison_table(const std::vector<ComparisonReport>& rows) {
  std::ostringstream out;
  const auto num = [](double v, int prec) {
    if (!std::isfinite(v)) return format_double(v);
    std::ostringstream s;
    s << std::fixed << std::setprecision(prec) << v;
    return s.str();
  };
  out << std::left << std::setw(24) << "reference" << std::right << std::setw(10) << "overlap" << std::setw(10)
      << "share" << std::setw(11) << "consensus" << std::setw(10) << "share" << std::setw(10) << "pearson"
      << std::setw(10) << "p" << std::setw(10) << "alpha" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(24) << r.reference_name << std::right << std::setw(10) << r.overlap_count
        << std::setw(10) << num(r.overlap_share, 4) << std::setw(11) << r.consensus_count << std::setw(10)
        << num(r.consensus_share, 4) << std::setw(10) << num(r.pearson_correlation, 4) << std::setw(10)
        << num(r.correlation_p_value, 4) << std::setw(10) << num(r.krippendorff_alpha, 4) << '\n';
  }
  return out.str();
}

double net_polarity(const ReferenceDictionary& reference, const std::vector<std::string>& terms,
                    const std::map<std::string, double>& idf) {
  double score = 0;
  for (const auto& [term, count] : count_terms(terms)) {
    const auto r = reference.entries.find(term);
    if (r == reference.entries.end()) continue;
    const auto w = idf.find(term);
    if (w == idf.end()) continue;
    score += r->second * count * w->second;
  }
  return score;
}

BenchmarkResult predictive_benchmark(const std::vector<TokenizedDocument>& docs, const VectorXd& responses,
                                     const std::vector<ReferenceDictionary>& references, const ModelConfig& config,
                                     std::uint64_t split_seed, double test_fraction) {
  const Index n = static_cast<Index>(docs.size());
  if (responses.size() != n) throw InputError("benchmark: number of responses does not match the corpus");
  if (references.empty()) throw InputError("benchmark: no reference dictionaries given");
  if (!(test_fraction > 0 && test_fraction < 1)) throw ConfigError("benchmark: test fraction must lie in (0, 1)");

  const Index n_test = static_cast<Index>(std::llround(static_cast<double>(n) * test_fraction));
  if (n_test < 10) throw InputError("benchmark: test split has " + std::to_string(n_test) + " documents; need 10");
  const auto order = shuffled_indices(n, split_seed);
  std::vector<Index> test(order.begin(), order.begin() + n_test);
  std::vector<Index> train(order.begin() + n_test, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());

  std::vector<TokenizedDocument> train_docs;
  VectorXd y_train(static_cast<Index>(train.size())), y_test(n_test);
  for (std::size_t i = 0; i < train.size(); ++i) {
    train_docs.push_back(docs[static_cast<std::size_t>(train[i])]);
    y_train(static_cast<Index>(i)) = responses(train[i]);
  }
  for (Index i = 0; i < n_test; ++i) y_test(i) = responses(test[static_cast<std::size_t>(i)]);

  BenchmarkResult res;
  res.n_train = static_cast<Index>(train.size());
  res.n_test = n_test;

  const ModelRun run = build_model(train_docs, y_train, config);
  const auto& dict = run.dictionary;
  res.lasso_terms = static_cast<Index>(dict.entries.size());
  VectorXd pred(n_test);
  for (Index i = 0; i < n_test; ++i) {
    const auto& d = docs[static_cast<std::size_t>(test[static_cast<std::size_t>(i)])];
    const double s = score_document(dict, d.terms(), d.doc_id).score;
    pred(i) = dict.metadata.response_mean + dict.metadata.response_sd * s;
  }
  res.lasso_mse = mse(pred, y_test);

  // idf over the training documents for every term they contain
  std::map<std::string, double> idf;
  {
    std::map<std::string, Index> df;
    for (const auto& d : train_docs) {
      auto terms = d.terms();
      std::sort(terms.begin(), terms.end());
      terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
      for (const auto& t : terms) ++df[t];
    }
    for (const auto& [t, f] : df)
      idf.emplace(t, std::log(static_cast<double>(train_docs.size()) / static_cast<double>(f)));
  }

  for (const auto& ref : references) {
    BenchmarkResult::Reference r;
    r.name = ref.name;
    for (const auto& [term, value] : ref.entries)
      if (idf.count(term)) ++r.matched_terms;
    VectorXd s_train(res.n_train), s_test(n_test);
    for (Index i = 0; i < res.n_train; ++i) s_train(i) = net_polarity(ref, train_docs[static_cast<std::size_t>(i)].terms(), idf);
    for (Index i = 0; i < n_test; ++i)
      s_test(i) = net_polarity(ref, docs[static_cast<std::size_t>(test[static_cast<std::size_t>(i)])].terms(), idf);

    const double sm = s_train.mean(), ym = y_train.mean();
    const VectorXd sc = s_train.array() - sm;
    const double sxx = sc.squaredNorm();
    r.calibration_slope = sxx > 0 ? sc.dot(VectorXd(y_train.array() - ym)) / sxx : 0.0;
    r.calibration_intercept = ym - r.calibration_slope * sm;
    const VectorXd p = (r.calibration_slope * s_test).array() + r.calibration_intercept;
    r.mse = mse(p, y_test);
    res.references.push_back(std::move(r));
  }
  return res;
}

}  // namespace polarity
