#include "polarity/text_pipeline.hpp"

#include "polarity/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace polarity {

// Generated from data/stopwords_en.txt at configure time.
extern const char* const kBundledStopwords;

namespace {

bool is_ascii_alpha(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Decodes one UTF-8 sequence at `pos`; returns the code point and advances
// `pos`. Invalid sequences decode to U+FFFD one byte at a time.
char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  const auto c0 = static_cast<unsigned char>(s[pos]);
  if (c0 < 0x80) {
    ++pos;
    return c0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((c0 & 0xE0) == 0xC0) {
    len = 2;
    cp = c0 & 0x1F;
  } else if ((c0 & 0xF0) == 0xE0) {
    len = 3;
    cp = c0 & 0x0F;
  } else if ((c0 & 0xF8) == 0xF0) {
    len = 4;
    cp = c0 & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + static_cast<std::size_t>(len) > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i < len; ++i) {
    const auto c = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(i)]);
    if ((c & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (c & 0x3F);
  }
  pos += static_cast<std::size_t>(len);
  return cp;
}

bool is_unicode_space(char32_t cp) {
  if (cp < 0x80) return is_ascii_space(static_cast<unsigned char>(cp));
  return cp == 0x85 || cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < s.size();) {
    decode_utf8(s, pos);
    ++n;
  }
  return n;
}

// Lowercase + strip + whitespace split.
std::vector<std::string> surface_tokens(std::string_view raw_text, const PipelineConfig& config) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };

  std::size_t pos = 0;
  while (pos < raw_text.size()) {
    const std::size_t start = pos;
    const char32_t cp = decode_utf8(raw_text, pos);
    if (config.strip_punctuation_and_digits) {
      // Anything that is not an ASCII letter acts as a separator.
      if (cp < 0x80 && is_ascii_alpha(static_cast<unsigned char>(cp))) {
        char c = static_cast<char>(cp);
        if (config.lowercase && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        current.push_back(c);
      } else {
        flush();
      }
      continue;
    }
    if (is_unicode_space(cp)) {
      flush();
    } else if (cp < 0x80) {
      char c = static_cast<char>(cp);
      if (config.lowercase && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      current.push_back(c);
    } else {
      current.append(raw_text.substr(start, pos - start));
    }
  }
  flush();
  return out;
}

std::string stem(std::string_view word, Stemmer stemmer) {
  switch (stemmer) {
    case Stemmer::porter:
      return porter_stem(word);
    case Stemmer::none:
      break;
  }
  return std::string(word);
}

std::set<std::string> parse_stopwords(std::istream& in) {
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.insert(line.substr(first, last - first + 1));
  }
  return words;
}

}  // namespace

PipelineConfig PipelineConfig::english() {
  PipelineConfig config;
  config.stopwords = default_stopwords();
  return config;
}

void PipelineConfig::validate() const {
  if (ngram_orders.empty()) throw ConfigError("pipeline: ngram_orders must not be empty");
  for (int k : ngram_orders)
    if (k < 1 || k > 3) throw ConfigError("pipeline: ngram orders must lie in {1,2,3}");
  if (min_token_length < 1) throw ConfigError("pipeline: min_token_length must be >= 1");
}

std::vector<std::string> TokenizedDocument::terms() const {
  if (ngram_orders.size() == 1 && *ngram_orders.begin() == 1) return tokens;
  return ngrams(tokens, ngram_orders);
}

std::vector<std::string> tokenize(std::string_view raw_text, const PipelineConfig& config) {
  std::vector<std::string> out;
  for (auto& token : surface_tokens(raw_text, config)) {
    if (config.stopwords.contains(token)) continue;
    if (utf8_length(token) < static_cast<std::size_t>(config.min_token_length)) continue;
    out.push_back(stem(token, config.stemmer));
  }
  return out;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, const std::set<int>& orders) {
  std::vector<std::string> out;
  for (int k : orders) {
    if (k < 1 || tokens.size() < static_cast<std::size_t>(k)) continue;
    const std::size_t count = tokens.size() - static_cast<std::size_t>(k) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      std::string term = tokens[i];
      for (int o = 1; o < k; ++o) {
        term.push_back(kNgramSeparator);
        term += tokens[i + static_cast<std::size_t>(o)];
      }
      out.push_back(std::move(term));
    }
  }
  return out;
}

TokenizedDocument tokenize_document(std::string doc_id, std::string_view raw_text,
                                    const PipelineConfig& config) {
  TokenizedDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.tokens = tokenize(raw_text, config);
  doc.half_split_index = doc.tokens.size() / 2;
  doc.ngram_orders = config.ngram_orders;
  return doc;
}

std::pair<std::vector<std::string>, std::vector<std::string>> split_halves(
    const TokenizedDocument& doc) {
  const std::size_t mid = doc.tokens.size() / 2;
  return {std::vector<std::string>(doc.tokens.begin(), doc.tokens.begin() + static_cast<std::ptrdiff_t>(mid)),
          std::vector<std::string>(doc.tokens.begin() + static_cast<std::ptrdiff_t>(mid), doc.tokens.end())};
}

std::string normalize_term(std::string_view surface, const PipelineConfig& config) {
  std::string out;
  for (const auto& token : surface_tokens(surface, config)) {
    if (!out.empty()) out.push_back(kNgramSeparator);
    out += stem(token, config.stemmer);
  }
  return out;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stop-word file " + path.string());
  return parse_stopwords(in);
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = [] {
    std::istringstream in(kBundledStopwords);
    return parse_stopwords(in);
  }();
  return words;
}

std::string_view to_string(Stemmer s) {
  switch (s) {
    case Stemmer::porter:
      return "porter";
    case Stemmer::none:
      break;
  }
  return "none";
}

Stemmer stemmer_from_string(std::string_view s) {
  if (s == "porter") return Stemmer::porter;
  if (s == "none") return Stemmer::none;
  throw ConfigError("unknown stemmer '" + std::string(s) + "'");
}

bool is_valid_utf8(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto c0 = static_cast<unsigned char>(text[pos]);
    if (c0 < 0x80) {
      ++pos;
      continue;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if (c0 >= 0xC2 && c0 <= 0xDF) {
      len = 2;
      cp = c0 & 0x1F;
    } else if ((c0 & 0xF0) == 0xE0) {
      len = 3;
      cp = c0 & 0x0F;
    } else if (c0 >= 0xF0 && c0 <= 0xF4) {
      len = 4;
      cp = c0 & 0x07;
    } else {
      return false;
    }
    if (pos + len > text.size()) return false;
    for (std::size_t i = 1; i < len; ++i) {
      const auto c = static_cast<unsigned char>(text[pos + i]);
      if ((c & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (c & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 3 && cp < 0x800) || (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) ||
        (cp >= 0xD800 && cp <= 0xDFFF))
      return false;
    pos += len;
  }
  return true;
}

}  // namespace polarity
