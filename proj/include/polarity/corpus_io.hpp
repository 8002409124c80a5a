#pragma once

#include "polarity/pipeline.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace polarity {

struct RawDocument {
  std::string id;
  std::filesystem::path path;
  std::string text;
};

/// Every `<doc_id>.txt` in `dir`, sorted by doc_id. Text must be UTF-8.
std::vector<RawDocument> load_corpus(const std::filesystem::path& dir);

/// `doc_id,value` with a header line; duplicate ids and non-numeric values
/// are parse errors.
std::map<std::string, double> load_responses(const std::filesystem::path& path);

/// Pairs documents with responses. Throws InputError listing every
/// document without a response.
std::vector<Document> attach_responses(const std::vector<RawDocument>& corpus,
                                       const std::map<std::string, double>& responses);

}  // namespace polarity
