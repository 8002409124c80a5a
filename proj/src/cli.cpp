#include "polarity/cli.hpp"

#include "polarity/corpus_io.hpp"
#include "polarity/errors.hpp"
#include "polarity/event_study.hpp"
#include "polarity/evaluation.hpp"
#include "polarity/format.hpp"
#include "polarity/hypotheses.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace polarity {
namespace {

constexpr const char* kVersion = "0.1.0";

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

Json lasso_to_json(const LassoSettings& s) {
  Json j;
  j["n_folds"] = s.n_folds;
  j["grid_points"] = s.grid_points;
  j["grid_ratio"] = s.grid_ratio;
  j["tol"] = s.tol;
  j["max_iter"] = s.max_iter;
  j["selection_rule"] = std::string(to_string(s.selection_rule));
  j["fold_seed"] = s.fold_seed;
  return j;
}

LassoSettings lasso_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("lasso: expected an object");
  static const std::set<std::string> known = {"n_folds", "grid_points",    "grid_ratio", "tol",
                                              "max_iter", "selection_rule", "fold_seed"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("lasso: unknown key '" + key + "'");
  LassoSettings s;
  if (j.contains("n_folds")) s.n_folds = j.at("n_folds").get<Index>();
  if (j.contains("grid_points")) s.grid_points = j.at("grid_points").get<int>();
  if (j.contains("grid_ratio")) s.grid_ratio = j.at("grid_ratio").get<double>();
  if (j.contains("tol")) s.tol = j.at("tol").get<double>();
  if (j.contains("max_iter")) s.max_iter = j.at("max_iter").get<int>();
  if (j.contains("selection_rule")) s.selection_rule = selection_rule_from_string(j.at("selection_rule").get<std::string>());
  if (j.contains("fold_seed")) s.fold_seed = j.at("fold_seed").get<std::uint64_t>();
  return s;
}

void validate(const ModelConfig& m) {
  m.pipeline.validate();
  if (m.lasso.n_folds < 2) throw ConfigError("lasso.n_folds must be at least 2");
  if (m.lasso.grid_points < 2) throw ConfigError("lasso.grid_points must be at least 2");
  if (!(m.lasso.grid_ratio > 0 && m.lasso.grid_ratio < 1)) throw ConfigError("lasso.grid_ratio must lie in (0, 1)");
  if (!(m.lasso.tol > 0)) throw ConfigError("lasso.tol must be positive");
  if (m.lasso.max_iter < 1) throw ConfigError("lasso.max_iter must be positive");
  if (m.min_doc_frequency && *m.min_doc_frequency < 1) throw ConfigError("min_doc_frequency must be at least 1");
  if (m.threads < 1) throw ConfigError("threads must be at least 1");
}

std::string file_sha(const std::filesystem::path& p) { return sha256_hex(read_file(p)); }

int threads_from_env(int fallback) {
  const char* v = std::getenv("POLARITY_THREADS");
  if (!v || !*v) return fallback;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) throw UsageError(std::string("POLARITY_THREADS must be a positive integer, got '") + v + "'");
  return static_cast<int>(n);
}

Json stats_to_json(const SummaryStatistics& s) {
  Json j;
  j["n"] = s.n;
  j["mean"] = number_to_json(s.mean);
  j["min"] = number_to_json(s.min);
  j["q25"] = number_to_json(s.q25);
  j["median"] = number_to_json(s.median);
  j["q75"] = number_to_json(s.q75);
  j["max"] = number_to_json(s.max);
  j["sd"] = number_to_json(s.sd);
  j["skewness"] = number_to_json(s.skewness);
  j["kurtosis"] = number_to_json(s.kurtosis);
  return j;
}

Json t_test_to_json(const WelchResult& r) {
  Json j;
  j["mean_1"] = number_to_json(r.mean_1);
  j["mean_2"] = number_to_json(r.mean_2);
  j["t_statistic"] = number_to_json(r.t_statistic);
  j["degrees_of_freedom"] = number_to_json(r.degrees_of_freedom);
  j["p_value"] = number_to_json(r.p_value);
  j["alternative"] = std::string(to_string(r.alternative));
  j["paired"] = r.paired;
  return j;
}

Json comparison_to_json(const ComparisonReport& r) {
  Json j;
  j["reference"] = r.reference_name;
  j["generated_size"] = r.generated_size;
  j["reference_size"] = r.reference_size;
  j["overlap_count"] = r.overlap_count;
  j["overlap_share"] = number_to_json(r.overlap_share);
  j["consensus_count"] = r.consensus_count;
  j["consensus_share"] = number_to_json(r.consensus_share);
  j["pearson_correlation"] = number_to_json(r.pearson_correlation);
  j["correlation_p_value"] = number_to_json(r.correlation_p_value);
  j["krippendorff_alpha"] = number_to_json(r.krippendorff_alpha);
  j["alpha_metric"] = std::string(to_string(r.alpha_metric));
  j["reference_ties_dropped"] = r.reference_ties_dropped;
  return j;
}

void emit(const std::string& contents, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-")
    out << contents;
  else
    write_file(path, contents);
}

std::vector<TokenizedDocument> tokenize_raw(const std::vector<RawDocument>& corpus, const PipelineConfig& pipeline) {
  std::vector<TokenizedDocument> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus) docs.push_back(tokenize_document(d.id, d.text, pipeline));
  return docs;
}

// Dictionary-term regressors rebuilt from a corpus with the stored scoring constants.
MatrixXd dictionary_regressors(const PolarityDictionary& dict, const std::vector<TokenizedDocument>& docs) {
  MatrixXd X(static_cast<Index>(docs.size()), static_cast<Index>(dict.entries.size()));
  std::map<std::string, Index> column;
  for (std::size_t j = 0; j < dict.entries.size(); ++j) column[dict.entries[j].term] = static_cast<Index>(j);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    VectorXd counts = VectorXd::Zero(X.cols());
    for (const auto& t : docs[i].terms())
      if (auto it = column.find(t); it != column.end()) counts(it->second) += 1;
    for (Index j = 0; j < X.cols(); ++j) {
      const auto& e = dict.entries[static_cast<std::size_t>(j)];
      X(static_cast<Index>(i), j) = (counts(j) * e.term_idf - e.term_mean) / e.term_sd;
    }
  }
  return X;
}

std::vector<double> aligned_responses(const std::vector<RawDocument>& corpus, const std::filesystem::path& path) {
  const auto docs = attach_responses(corpus, load_responses(path));
  std::vector<double> y;
  for (const auto& d : docs) y.push_back(d.response);
  return y;
}

// ---- build ----

struct BuildFlags {
  std::string config;
  std::string corpus, responses, output;
  std::string weighting, rule, class_threshold;
  std::optional<Index> min_df, folds;
  std::optional<int> grid_points, max_iter;
  std::optional<double> grid_ratio, tol;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  bool dump_dtm = false;
};

Json model_report(const ModelRun& run) {
  Json j;
  const auto& path = run.path;
  j["n_documents"] = run.regressors.n_documents();
  j["min_doc_frequency"] = run.min_doc_frequency;
  j["n_terms_after_min_df"] = run.counts.n_terms();
  j["n_terms_after_weighting"] = run.weighted.n_terms();
  j["n_candidate_terms"] = run.regressors.n_terms();
  j["dropped_zero_variance_terms"] = run.regressors.dropped_terms;
  j["weighting"] = std::string(to_string(run.weighted.weighting));
  j["response_mean"] = number_to_json(run.response.mean);
  j["response_sd"] = number_to_json(run.response.std_dev);

  Json steps = Json::array();
  for (std::size_t l = 0; l < path.lambdas.size(); ++l) {
    Json s;
    s["lambda"] = number_to_json(path.lambdas[l]);
    s["cv_mean_error"] = number_to_json(path.cv_mean_error[l]);
    s["cv_se_error"] = number_to_json(path.cv_se_error[l]);
    s["n_nonzero"] = path.fits[l].active_set.size();
    s["converged"] = path.fits[l].converged;
    steps.push_back(std::move(s));
  }
  j["lambda_path"] = std::move(steps);
  j["n_folds"] = path.n_folds;
  j["selection_rule"] = std::string(to_string(path.selection_rule));
  j["selected_index"] = path.selected_index;
  j["selected_lambda"] = number_to_json(path.selected_lambda);
  j["non_converged_fits"] = run.non_converged_fits;

  const auto& active = path.selected().active_set;
  j["n_active"] = active.size();
  j["n_positive"] = run.dictionary.metadata.n_positive;
  j["n_negative"] = run.dictionary.metadata.n_negative;
  if (run.post) {
    Json p;
    p["r2"] = number_to_json(run.post->r2);
    p["adjusted_r2"] = number_to_json(run.post->adjusted_r2);
    p["residual_variance"] = number_to_json(run.post->residual_variance);
    p["rank_dropped_terms"] = run.dictionary.metadata.rank_dropped_terms;
    j["post_lasso"] = std::move(p);
  } else {
    j["post_lasso"] = nullptr;
  }

  Json v;
  const Index n = run.regressors.n_documents();
  const Index p = static_cast<Index>(active.size());
  if (p >= 2 && p < n) {
    const auto rep = vif(run.regressors.values, active, 4.0);
    v["computed"] = true;
    v["threshold"] = rep.threshold;
    v["count_exceeding_threshold"] = rep.count_exceeding_threshold;
    v["max"] = number_to_json(rep.vif.maxCoeff());
    v["mean"] = number_to_json(rep.vif.mean());
    Json terms;
    for (std::size_t c = 0; c < rep.terms.size(); ++c)
      terms[run.regressors.vocabulary[static_cast<std::size_t>(rep.terms[c])]] =
          number_to_json(rep.vif(static_cast<Index>(c)));
    v["terms"] = std::move(terms);
  } else {
    v["computed"] = false;
    v["reason"] = p < 2 ? "fewer than 2 selected terms" : "selected terms not fewer than documents";
  }
  j["vif"] = std::move(v);
  j["warnings"] = run.warnings;
  return j;
}

int cmd_build(const BuildFlags& f, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (!f.config.empty()) cfg = load_run_config(f.config);
  if (!f.corpus.empty()) cfg.corpus_path = f.corpus;
  if (!f.responses.empty()) cfg.response_path = f.responses;
  if (!f.output.empty()) cfg.output_dir = f.output;
  auto& m = cfg.model;
  if (!f.weighting.empty()) m.weighting = weighting_from_string(f.weighting);
  if (!f.rule.empty()) m.lasso.selection_rule = selection_rule_from_string(f.rule);
  if (!f.class_threshold.empty()) m.class_rule = class_threshold_from_string(f.class_threshold);
  if (f.min_df) m.min_doc_frequency = *f.min_df;
  if (f.folds) m.lasso.n_folds = *f.folds;
  if (f.grid_points) m.lasso.grid_points = *f.grid_points;
  if (f.max_iter) m.lasso.max_iter = *f.max_iter;
  if (f.grid_ratio) m.lasso.grid_ratio = *f.grid_ratio;
  if (f.tol) m.lasso.tol = *f.tol;
  if (f.seed) m.lasso.fold_seed = *f.seed;
  if (f.strict) m.strict = true;
  m.threads = threads_from_env(m.threads);
  validate(m);
  if (cfg.corpus_path.empty()) throw UsageError("build: no corpus given (--corpus or corpus_path in --config)");
  if (cfg.response_path.empty()) throw UsageError("build: no responses given (--responses or response_path in --config)");
  if (cfg.output_dir.empty()) throw UsageError("build: no output directory given (--output or output_dir in --config)");

  const auto corpus = load_corpus(cfg.corpus_path);
  const auto docs = attach_responses(corpus, load_responses(cfg.response_path));
  const ModelRun run = build_model(docs, m);
  for (const auto& w : run.warnings) err << "warning: " << w << '\n';

  std::filesystem::create_directories(cfg.output_dir);
  const auto dict_path = cfg.output_dir / "dictionary.csv";
  save(run.dictionary, dict_path);
  write_file(cfg.output_dir / "model_report.json", dump_canonical(model_report(run)));
  std::vector<std::string> outputs = {"dictionary.csv", "dictionary.json", "model_report.json"};
  if (f.dump_dtm) {
    write_triplets(run.weighted, cfg.output_dir / "dtm.csv", cfg.output_dir / "dtm_vocabulary.csv");
    outputs.push_back("dtm.csv");
    outputs.push_back("dtm_vocabulary.csv");
  }

  Json manifest;
  manifest["format"] = "polarity-manifest";
  manifest["version"] = 1;
  manifest["tool_version"] = kVersion;
  manifest["command"] = "build";
  manifest["config"] = run_config_to_json(cfg, true);
  Json files;
  std::string combined;
  for (const auto& d : corpus) {
    const auto h = sha256_hex(d.text);
    files[d.id] = h;
    combined += d.id + '\t' + h + '\n';
  }
  manifest["inputs"]["corpus"]["n_documents"] = corpus.size();
  manifest["inputs"]["corpus"]["sha256"] = sha256_hex(combined);
  manifest["inputs"]["corpus"]["files"] = std::move(files);
  manifest["inputs"]["responses"]["sha256"] = file_sha(cfg.response_path);
  for (const auto& name : outputs) manifest["outputs"][name] = file_sha(cfg.output_dir / name);
  write_file(cfg.output_dir / "manifest.json", dump_canonical(manifest));

  out << "dictionary: " << run.dictionary.entries.size() << " terms (" << run.dictionary.metadata.n_positive
      << " positive, " << run.dictionary.metadata.n_negative << " negative), adjusted R2 "
      << format_double(run.dictionary.metadata.adjusted_r2) << "\n"
      << "written to " << cfg.output_dir.string() << '\n';
  return kExitOk;
}

// ---- score ----

int cmd_score(const std::string& dict_path, const std::string& corpus_path, const std::string& config_path,
              bool halves, const std::string& output, std::ostream& out) {
  const auto dict = load(dict_path);
  const auto& pipeline = dict.metadata.pipeline;
  if (!config_path.empty()) {
    const auto cfg = load_run_config(config_path);
    if (!(cfg.model.pipeline == pipeline)) {
      std::string what = "text pipeline of " + config_path + " differs from the one the dictionary was built with";
      if (cfg.model.pipeline.stemmer != pipeline.stemmer)
        what += " (stemmer " + std::string(to_string(cfg.model.pipeline.stemmer)) + " vs " +
                std::string(to_string(pipeline.stemmer)) + ")";
      throw InputError(what);
    }
  }
  const auto docs = tokenize_raw(load_corpus(corpus_path), pipeline);
  std::string csv = halves ? "doc_id,mu1,mu2,mu\n" : "doc_id,score,fitted\n";
  for (const auto& d : docs) {
    if (halves) {
      const auto h = score_halves(dict, d);
      csv += d.doc_id + "," + format_double(h.mu1) + "," + format_double(h.mu2) + "," + format_double(h.mu) + "\n";
    } else {
      const auto s = score_document(dict, d.terms(), d.doc_id);
      const double fitted = dict.metadata.response_mean + dict.metadata.response_sd * s.score;
      csv += d.doc_id + "," + format_double(s.score) + "," + format_double(fitted) + "\n";
    }
  }
  emit(csv, output, out);
  return kExitOk;
}

// ---- compare ----

int cmd_compare(const std::string& dict_path, const std::vector<std::string>& refs, const std::string& metric,
                const std::string& json_path, std::ostream& out) {
  const auto dict = load(dict_path);
  const auto m = alpha_metric_from_string(metric);
  std::vector<ComparisonReport> rows;
  for (const auto& r : refs) rows.push_back(compare(dict, load_reference(r, dict.metadata.pipeline), m));
  out << comparison_table(rows);
  if (!json_path.empty()) {
    Json j;
    j["dictionary"] = dict_path;
    j["rows"] = Json::array();
    for (const auto& r : rows) j["rows"].push_back(comparison_to_json(r));
    write_file(json_path, dump_canonical(j));
  }
  return kExitOk;
}

// ---- hypothesis ----

int cmd_placement(const std::string& dict_path, const std::string& corpus_path, const std::string& responses,
                  const std::string& alternative, const std::string& output, std::ostream& out) {
  const auto dict = load(dict_path);
  const auto corpus = load_corpus(corpus_path);
  const auto y = aligned_responses(corpus, responses);
  const auto docs = tokenize_raw(corpus, dict.metadata.pipeline);
  std::vector<HalfScores> halves;
  for (const auto& d : docs) halves.push_back(score_halves(dict, d));
  const auto rep = placement_test(halves, y, dict.metadata.class_threshold, alternative_from_string(alternative));

  Json j;
  j["test"] = "placement";
  j["class_threshold"] = number_to_json(rep.class_threshold);
  j["welch"] = t_test_to_json(rep.welch);
  j["paired"] = t_test_to_json(rep.paired);
  j["panels"] = Json::array();
  for (const auto& p : rep.panels) {
    Json pj;
    pj["name"] = p.name;
    pj["mu1"] = stats_to_json(p.mu1);
    pj["mu2"] = stats_to_json(p.mu2);
    pj["mu"] = stats_to_json(p.mu);
    j["panels"].push_back(std::move(pj));
  }
  emit(dump_canonical(j), output, out);
  return kExitOk;
}

int cmd_joint_f(const std::string& dict_path, const std::string& corpus_path, const std::string& responses,
                const std::string& reference, const std::string& output, std::ostream& out) {
  if (reference.empty()) throw UsageError("hypothesis joint-f requires --reference");
  const auto dict = load(dict_path);
  if (dict.entries.empty()) throw InputError("dictionary " + dict_path + " has no entries");
  const auto ref = load_reference(reference, dict.metadata.pipeline);
  const auto part = partition_by_reference(dict, ref);
  if (part.non_informative.empty())
    throw UsageError("the reference covers every dictionary term; no non-informative terms to test");

  const auto corpus = load_corpus(corpus_path);
  const auto yv = aligned_responses(corpus, responses);
  const auto X = dictionary_regressors(dict, tokenize_raw(corpus, dict.metadata.pipeline));
  const VectorXd y = Eigen::Map<const VectorXd>(yv.data(), static_cast<Index>(yv.size()));
  std::vector<Index> full, tested;
  for (std::size_t j = 0; j < dict.entries.size(); ++j) {
    full.push_back(static_cast<Index>(j));
    if (!ref.entries.count(dict.entries[j].term)) tested.push_back(static_cast<Index>(j));
  }
  const auto res = joint_f_test(X, y, full, tested);

  Json j;
  j["test"] = "joint-f";
  j["reference"] = ref.name;
  j["informative_terms"] = part.informative;
  j["non_informative_terms"] = part.non_informative;
  j["informative_share"] = number_to_json(part.informative_share);
  j["f_statistic"] = number_to_json(res.f_statistic);
  j["df_numerator"] = res.df_numerator;
  j["df_denominator"] = res.df_denominator;
  j["p_value"] = number_to_json(res.p_value);
  j["rss_full"] = number_to_json(res.rss_full);
  j["rss_restricted"] = number_to_json(res.rss_restricted);
  Json tested_terms = Json::array();
  for (Index c : res.tested_terms) tested_terms.push_back(dict.entries[static_cast<std::size_t>(c)].term);
  j["tested_terms"] = std::move(tested_terms);
  emit(dump_canonical(j), output, out);
  return kExitOk;
}

// ---- event-study ----

int cmd_event_study(const std::string& prices_dir, const std::string& market_csv, const std::string& events_csv,
                    int window, long min_words, double min_price, const std::string& output, std::ostream& out,
                    std::ostream& err) {
  const auto market = load_price_csv(market_csv, "market");
  const auto all = load_events_csv(events_csv);
  const auto kept = filter_events(all, min_words, min_price);
  if (kept.size() < all.size())
    err << "note: " << all.size() - kept.size() << " of " << all.size()
        << " events removed by the word-count and price filters\n";
  if (kept.empty()) err << "warning: no events left after filtering; output has no rows\n";
  emit(event_results_csv(run_event_study(kept, prices_dir, market, window)), output, out);
  return kExitOk;
}

}  // namespace

Json run_config_to_json(const RunConfig& c, bool for_manifest) {
  Json j;
  j["corpus_path"] = c.corpus_path.string();
  j["response_path"] = c.response_path.string();
  if (!for_manifest) {
    j["output_dir"] = c.output_dir.string();
    j["threads"] = c.model.threads;
  }
  j["pipeline"] = pipeline_to_json(c.model.pipeline);
  j["weighting"] = std::string(to_string(c.model.weighting));
  if (c.model.min_doc_frequency)
    j["min_doc_frequency"] = *c.model.min_doc_frequency;
  else
    j["min_doc_frequency"] = nullptr;
  j["lasso"] = lasso_to_json(c.model.lasso);
  j["class_threshold"] = std::string(to_string(c.model.class_rule));
  j["strict"] = c.model.strict;
  return j;
}

RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> known = {"corpus_path", "response_path", "output_dir", "threads",
                                              "pipeline",    "weighting",     "min_doc_frequency",
                                              "lasso",       "class_threshold", "strict"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
  RunConfig c;
  try {
    if (j.contains("corpus_path")) c.corpus_path = resolve(j.at("corpus_path").get<std::string>(), base_dir);
    if (j.contains("response_path")) c.response_path = resolve(j.at("response_path").get<std::string>(), base_dir);
    if (j.contains("output_dir")) c.output_dir = resolve(j.at("output_dir").get<std::string>(), base_dir);
    if (j.contains("threads")) c.model.threads = j.at("threads").get<int>();
    if (j.contains("pipeline")) {
      Json p = j.at("pipeline");
      if (p.is_object() && p.contains("stopwords_file"))
        p["stopwords_file"] = resolve(p["stopwords_file"].get<std::string>(), base_dir).string();
      c.model.pipeline = pipeline_from_json(p);
    }
    if (j.contains("weighting")) c.model.weighting = weighting_from_string(j.at("weighting").get<std::string>());
    if (j.contains("min_doc_frequency") && !j.at("min_doc_frequency").is_null())
      c.model.min_doc_frequency = j.at("min_doc_frequency").get<Index>();
    if (j.contains("lasso")) c.model.lasso = lasso_from_json(j.at("lasso"));
    if (j.contains("class_threshold"))
      c.model.class_rule = class_threshold_from_string(j.at("class_threshold").get<std::string>());
    if (j.contains("strict")) c.model.strict = j.at("strict").get<bool>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c.model);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return run_config_from_json(j, path.parent_path());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s.push_back(hex[digest[i] >> 4]);
    s.push_back(hex[digest[i] & 0xf]);
  }
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generate and evaluate polarity dictionaries from a corpus and a response variable.", "polarity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  BuildFlags bf;
  auto* build = app.add_subcommand("build", "Fit a dictionary from a corpus directory and a response CSV.");
  build->add_option("--config", bf.config, "JSON run configuration; flags below override it");
  build->add_option("--corpus", bf.corpus, "Directory of <doc_id>.txt files");
  build->add_option("--responses", bf.responses, "CSV with header doc_id,value");
  build->add_option("--output", bf.output, "Output directory");
  build->add_option("--weighting", bf.weighting, "tfidf or raw_tf");
  build->add_option("--min-df", bf.min_df, "Minimum document frequency (default: 1% of documents)");
  build->add_option("--folds", bf.folds, "Cross-validation folds");
  build->add_option("--grid-points", bf.grid_points, "Number of lambda values");
  build->add_option("--grid-ratio", bf.grid_ratio, "Smallest lambda as a fraction of lambda_max");
  build->add_option("--tol", bf.tol, "Coordinate descent tolerance");
  build->add_option("--max-iter", bf.max_iter, "Coordinate descent cycle limit");
  build->add_option("--rule", bf.rule, "Lambda selection rule: min or one_se");
  build->add_option("--seed", bf.seed, "Fold assignment seed");
  build->add_option("--class-threshold", bf.class_threshold, "median or zero; splits documents for the share columns");
  build->add_flag("--strict", bf.strict, "Exit with code 4 if any path fit fails to converge");
  build->add_flag("--dump-dtm", bf.dump_dtm, "Also write the weighted document-term matrix as triplets");

  std::string dict_path, corpus_path, config_path, output, responses, reference, metric = "automatic",
                                                                          alternative = "two_sided", json_path;
  bool halves = false;
  auto* score = app.add_subcommand("score", "Score documents with a dictionary.");
  score->add_option("--dictionary", dict_path, "Dictionary CSV (JSON sidecar next to it)")->required();
  score->add_option("--corpus", corpus_path, "Directory of <doc_id>.txt files")->required();
  score->add_option("--config", config_path, "Run configuration whose pipeline must match the dictionary");
  score->add_flag("--halves", halves, "Write mu1, mu2 and mu (first half, second half, whole document)");
  score->add_option("--output", output, "Output CSV (default: stdout)");

  std::vector<std::string> refs;
  auto* cmp = app.add_subcommand("compare", "Compare a dictionary with reference word lists.");
  cmp->add_option("--dictionary", dict_path, "Dictionary CSV")->required();
  cmp->add_option("references", refs, "Reference files with term,value lines")->required();
  cmp->add_option("--metric", metric, "Alpha metric: automatic, nominal or interval");
  cmp->add_option("--json", json_path, "Also write the report as JSON");

  auto* hyp = app.add_subcommand("hypothesis", "Placement and word-group tests.");
  hyp->require_subcommand(1);
  auto* placement = hyp->add_subcommand("placement", "Half-document sentiment summary and t-tests.");
  auto* jointf = hyp->add_subcommand("joint-f", "F-test on dictionary terms absent from a reference.");
  for (auto* sub : {placement, jointf}) {
    sub->add_option("--dictionary", dict_path, "Dictionary CSV")->required();
    sub->add_option("--corpus", corpus_path, "Directory of <doc_id>.txt files")->required();
    sub->add_option("--responses", responses, "CSV with header doc_id,value")->required();
    sub->add_option("--output", output, "Output JSON (default: stdout)");
  }
  placement->add_option("--alternative", alternative, "two_sided, less or greater (mu1 relative to mu2)");
  jointf->add_option("--reference", reference, "Reference word list splitting the terms");

  std::string prices_dir, market_csv, events_csv;
  int window = 10;
  long min_words = 200;
  double min_price = 5.0;
  auto* es = app.add_subcommand("event-study", "Market-model abnormal returns as a response CSV.");
  es->add_option("--prices", prices_dir, "Directory of <instrument_id>.csv price files")->required();
  es->add_option("--market", market_csv, "Market index price CSV")->required();
  es->add_option("--events", events_csv, "Events CSV")->required();
  es->add_option("--window", window, "Estimation window in trading days");
  es->add_option("--min-words", min_words, "Drop events with fewer words");
  es->add_option("--min-price", min_price, "Drop events priced below this");
  es->add_option("--output", output, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return cmd_build(bf, out, err);
    if (*score) return cmd_score(dict_path, corpus_path, config_path, halves, output, out);
    if (*cmp) return cmd_compare(dict_path, refs, metric, json_path, out);
    if (*placement) return cmd_placement(dict_path, corpus_path, responses, alternative, output, out);
    if (*jointf) return cmd_joint_f(dict_path, corpus_path, responses, reference, output, out);
    if (*es) return cmd_event_study(prices_dir, market_csv, events_csv, window, min_words, min_price, output, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace polarity
