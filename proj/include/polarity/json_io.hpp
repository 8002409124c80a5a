#pragma once

#include "polarity/text_pipeline.hpp"

#include <json.hpp>

#include <string>

namespace polarity {

using Json = nlohmann::json;

Json pipeline_to_json(const PipelineConfig& config);

/// Accepts either an explicit "stopwords" array or a "stopwords_file" path;
/// neither means the bundled list.
PipelineConfig pipeline_from_json(const Json& j);

/// Doubles that may be nan/inf are stored as strings so JSON stays valid.
Json number_to_json(double value);
double number_from_json(const Json& j);

/// Two-space indented dump with a trailing newline.
std::string dump_canonical(const Json& j);

}  // namespace polarity
