#include "polarity/corpus_io.hpp"

#include "polarity/errors.hpp"
#include "polarity/format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace polarity {

std::vector<RawDocument> load_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw InputError("corpus directory " + dir.string() + " does not exist");
  std::vector<RawDocument> docs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    RawDocument d;
    d.id = entry.path().stem().string();
    d.path = entry.path();
    d.text = read_file(entry.path());
    if (!is_valid_utf8(d.text)) throw InputError(entry.path().string() + ": text is not valid UTF-8");
    docs.push_back(std::move(d));
  }
  if (docs.empty()) throw InvalidCorpus("corpus directory " + dir.string() + " contains no .txt documents");
  std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return docs;
}

std::map<std::string, double> load_responses(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open response file " + path.string());
  const std::string source = path.string();
  std::map<std::string, double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "doc_id,value") throw ParseError(source, 1, "expected header 'doc_id,value'");
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw ParseError(source, line_no, "expected 'doc_id,value'");
    double v = 0;
    if (!parse_double(fields[1], v) || !std::isfinite(v))
      throw ParseError(source, line_no, "response '" + fields[1] + "' is not a finite number");
    if (!out.emplace(fields[0], v).second) throw ParseError(source, line_no, "duplicate doc_id '" + fields[0] + "'");
  }
  if (line_no == 0) throw ParseError(source, 1, "empty file");
  return out;
}

std::vector<Document> attach_responses(const std::vector<RawDocument>& corpus,
                                       const std::map<std::string, double>& responses) {
  std::vector<Document> docs;
  std::vector<std::string> missing;
  for (const auto& d : corpus) {
    const auto it = responses.find(d.id);
    if (it == responses.end()) {
      missing.push_back(d.id);
      continue;
    }
    docs.push_back({d.id, d.text, it->second});
  }
  if (!missing.empty()) {
    std::string msg = "no response for " + std::to_string(missing.size()) + " document(s):";
    for (const auto& id : missing) msg += " " + id;
    throw InputError(msg);
  }
  return docs;
}

}  // namespace polarity
