#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polarity {

enum class Stemmer { none, porter };

/// Separator used to join the stems of an n-gram into one term.
inline constexpr char kNgramSeparator = '_';

struct PipelineConfig {
  bool lowercase = true;
  bool strip_punctuation_and_digits = true;
  std::set<std::string> stopwords;
  Stemmer stemmer = Stemmer::porter;
  std::set<int> ngram_orders = {1};
  int min_token_length = 3;

  /// Default English configuration with the bundled stop-word list.
  static PipelineConfig english();

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// A document after tokenization. `tokens` holds the unigram stem stream;
/// n-gram terms are derived from it on demand so that both halves of a
/// document can be expanded independently.
struct TokenizedDocument {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::size_t half_split_index = 0;
  std::set<int> ngram_orders = {1};

  /// The vocabulary terms of the document (unigrams and/or n-grams).
  std::vector<std::string> terms() const;
};

/// Stems a single lowercase word with the Porter algorithm.
std::string porter_stem(std::string_view word);

/// Lowercase, strip, split, stop-word filter, length filter and stem, in
/// that order. Returns unigram stems only.
std::vector<std::string> tokenize(std::string_view raw_text, const PipelineConfig& config);

/// All order-k windows for each k in `orders`, lowest order first.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens, const std::set<int>& orders);

TokenizedDocument tokenize_document(std::string doc_id, std::string_view raw_text,
                                    const PipelineConfig& config);

std::pair<std::vector<std::string>, std::vector<std::string>> split_halves(
    const TokenizedDocument& doc);

/// Normalizes a single lexicon entry (possibly multi-word) to a vocabulary
/// term: same pipeline as documents but without stop-word removal, words
/// joined with the n-gram separator.
std::string normalize_term(std::string_view surface, const PipelineConfig& config);

/// Reads a stop-word file: one word per line, `#` starts a comment.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

/// The bundled English stop-word list.
const std::set<std::string>& default_stopwords();

std::string_view to_string(Stemmer s);
Stemmer stemmer_from_string(std::string_view s);

/// True when `text` is well-formed UTF-8.
bool is_valid_utf8(std::string_view text);

}  // namespace polarity
