#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "incode/codebook/codebook.h"
#include "incode/common/json_io.h"

namespace incode::codebook {

enum class ExportFormat { TableDoc, Structured };

std::optional<ExportFormat> parse_export_format(std::string_view s);  // "table" | "structured"

// Markdown table, one row per code, examples as "● id: Role: content"
// bullets separated by <br>. An empty codebook renders the header only.
std::string render_table_doc(const Codebook& codebook);

// Lossless: codebook_from_json(to_json(c)) == c.
json to_json(const Codebook& codebook);
Codebook codebook_from_json(const json& doc);

std::string export_codebook(const Codebook& codebook, ExportFormat format);

void save_codebook(const std::filesystem::path& path, const Codebook& codebook);
Codebook load_codebook(const std::filesystem::path& path);

}  // namespace incode::codebook
