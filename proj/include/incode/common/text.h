#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace incode::text {

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_valid_utf8(std::string_view s);

// Lowercased tokens made of ASCII alphanumerics and non-ASCII bytes.
// Everything else separates tokens; empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view s);

std::string replace_all(std::string s, std::string_view from, std::string_view to);

}  // namespace incode::text
