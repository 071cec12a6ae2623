#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace incode {

using json = nlohmann::json;

json read_json_file(const std::filesystem::path& path);

// Pretty-printed with sorted keys and a trailing newline, so equal documents
// produce equal bytes.
void write_json_file(const std::filesystem::path& path, const json& doc);
std::string dump_canonical(const json& doc);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Checks the "format"/"version" header of a structured document.
void expect_format(const json& doc, const std::string& format, int version);

}  // namespace incode
