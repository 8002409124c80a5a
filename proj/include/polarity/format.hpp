#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace polarity {

/// Shortest decimal representation that parses back to the same double.
/// Infinities are written as "inf"/"-inf", NaN as "nan".
std::string format_double(double value);

/// Parses a full-field double (accepts "inf", "-inf", "nan"). Returns false
/// on any trailing garbage.
bool parse_double(std::string_view text, double& out);

/// Splits one CSV record on commas. Quoting is not supported; fields must
/// not contain commas.
std::vector<std::string> split_csv_line(std::string_view line);

/// Reads a whole file as bytes; throws InputError when unreadable.
std::string read_file(const std::filesystem::path& path);

/// Writes bytes to a file, replacing it; throws InputError on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace polarity
