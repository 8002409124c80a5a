#include "polarity/json_io.hpp"

#include "polarity/errors.hpp"
#include "polarity/format.hpp"
#include "polarity/types.hpp"

#include <cmath>

namespace polarity {

Json pipeline_to_json(const PipelineConfig& config) {
  Json j;
  j["lowercase"] = config.lowercase;
  j["strip_punctuation_and_digits"] = config.strip_punctuation_and_digits;
  j["stopwords"] = Json::array();
  for (const auto& w : config.stopwords) j["stopwords"].push_back(w);
  j["stemmer"] = std::string(to_string(config.stemmer));
  j["ngram_orders"] = Json::array();
  for (int k : config.ngram_orders) j["ngram_orders"].push_back(k);
  j["min_token_length"] = config.min_token_length;
  return j;
}

PipelineConfig pipeline_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("pipeline: expected an object");
  static const std::set<std::string> known = {"lowercase",    "strip_punctuation_and_digits", "stopwords",
                                              "stopwords_file", "stemmer", "ngram_orders", "min_token_length"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("pipeline: unknown key '" + key + "'");

  PipelineConfig c = PipelineConfig::english();
  try {
    if (j.contains("lowercase")) c.lowercase = j.at("lowercase").get<bool>();
    if (j.contains("strip_punctuation_and_digits"))
      c.strip_punctuation_and_digits = j.at("strip_punctuation_and_digits").get<bool>();
    if (j.contains("stopwords") && j.contains("stopwords_file"))
      throw ConfigError("pipeline: give either stopwords or stopwords_file, not both");
    if (j.contains("stopwords")) {
      c.stopwords.clear();
      for (const auto& w : j.at("stopwords")) c.stopwords.insert(w.get<std::string>());
    }
    if (j.contains("stopwords_file")) c.stopwords = load_stopwords(j.at("stopwords_file").get<std::string>());
    if (j.contains("stemmer")) c.stemmer = stemmer_from_string(j.at("stemmer").get<std::string>());
    if (j.contains("ngram_orders")) {
      c.ngram_orders.clear();
      for (const auto& k : j.at("ngram_orders")) c.ngram_orders.insert(k.get<int>());
    }
    if (j.contains("min_token_length")) c.min_token_length = j.at("min_token_length").get<int>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("pipeline: ") + e.what());
  }
  c.validate();
  return c;
}

Json number_to_json(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    double v = 0;
    if (parse_double(j.get<std::string>(), v)) return v;
  }
  if (j.is_null()) return undefined();
  throw ConfigError("expected a number, got " + j.dump());
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace polarity
