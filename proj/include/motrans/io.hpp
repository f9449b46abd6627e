#pragma once

#include <filesystem>
#include <string>

namespace motrans {

/// Reads a whole file. Throws MissingFile if it does not exist.
std::string read_text_file(const std::filesystem::path& path);

/// Writes `content` to a temp file in the target directory, then renames it
/// into place, so a failed write never leaves a partial output file.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Fixed-point formatting with 9 decimal places; the CSV interchange format.
std::string format_fixed9(double v);

/// Shortest-ish general formatting for SVG coordinates and summaries.
std::string format_g6(double v);

/// General formatting with 12 significant digits (loss logs, reports).
std::string format_g12(double v);

}  // namespace motrans
