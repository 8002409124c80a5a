#include "polarity/pipeline.hpp"

#include "polarity/errors.hpp"

namespace polarity {

std::vector<TokenizedDocument> tokenize_corpus(const std::vector<Document>& corpus, const PipelineConfig& config) {
  config.validate();
  std::vector<TokenizedDocument> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus) docs.push_back(tokenize_document(d.id, d.text, config));
  return docs;
}

ModelRun build_model(const std::vector<TokenizedDocument>& docs, const VectorXd& responses,
                     const ModelConfig& config) {
  if (static_cast<Index>(docs.size()) != responses.size())
    throw InputError("number of responses does not match the number of documents");

  ModelRun run;
  run.min_doc_frequency =
      config.min_doc_frequency.value_or(default_min_doc_frequency(static_cast<Index>(docs.size())));
  run.counts = build_matrix(docs, run.min_doc_frequency);
  run.weighted = config.weighting == Weighting::tfidf ? apply_tfidf(run.counts) : run.counts;
  run.regressors = standardize(run.weighted);
  for (const auto& t : run.regressors.dropped_terms)
    run.warnings.push_back("dropped zero-variance term '" + t + "'");
  if (run.regressors.n_terms() == 0) throw InvalidCorpus("no terms left after filtering");

  run.raw_response.values = responses;
  run.response = standardize_response(run.raw_response);

  const auto& X = run.regressors.values;
  const auto& y = run.response.values;
  const auto& s = config.lasso;
  const double lmax = lasso_lambda_max(X, y);
  const auto grid = default_grid(lmax, s.grid_points, s.grid_ratio);

  CrossValidationOptions cv;
  cv.lasso.tol = s.tol;
  cv.lasso.max_iter = s.max_iter;
  cv.rule = s.selection_rule;
  cv.threads = config.threads;
  run.path = cross_validate(X, y, s.n_folds, grid, s.fold_seed, cv);

  for (const auto& fit : run.path.fits)
    if (!fit.converged) ++run.non_converged_fits;
  if (run.non_converged_fits > 0) {
    const std::string msg = std::to_string(run.non_converged_fits) + " of " + std::to_string(run.path.fits.size()) +
                            " path fits did not converge within max_iter";
    if (config.strict) throw NumericalError(msg);
    run.warnings.push_back(msg);
  }

  const auto& selected = run.path.selected();
  if (!selected.active_set.empty()) {
    if (static_cast<Index>(selected.active_set.size()) + 1 >= X.rows())
      run.warnings.push_back("active set too large for a Post-LASSO refit");
    else
      run.post = post_lasso(X, y, selected.active_set);
  }

  // Too many terms to refit: the dictionary keeps LASSO coefficients without standard errors.
  const PostLassoResult<double> no_refit;
  const bool refit_skipped = !selected.active_set.empty() && !run.post;
  DictionaryInputs in{run.path,
                      run.post ? &*run.post : (refit_skipped ? &no_refit : nullptr),
                      run.weighted,
                      run.regressors,
                      run.raw_response,
                      run.response,
                      config.pipeline,
                      config.class_rule};
  run.dictionary = build_dictionary(in, &run.warnings);
  for (auto& term : run.post ? run.post->dropped : std::vector<Index>{})
    run.warnings.push_back("Post-LASSO dropped linearly dependent term '" +
                           run.regressors.vocabulary[static_cast<std::size_t>(term)] + "'");
  return run;
}

ModelRun build_model(const std::vector<Document>& corpus, const ModelConfig& config) {
  VectorXd y(static_cast<Index>(corpus.size()));
  for (std::size_t i = 0; i < corpus.size(); ++i) y(static_cast<Index>(i)) = corpus[i].response;
  return build_model(tokenize_corpus(corpus, config.pipeline), y, config);
}

}  // namespace polarity
