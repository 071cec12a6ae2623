#include "incode/coding/response_grammar.h"

#include <cctype>
#include <optional>
#include <regex>

#include "incode/common/text.h"

namespace incode::coding {

namespace {

std::string strip_quotes(std::string_view s) {
  s = text::trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return std::string(s.substr(1, s.size() - 2));
  constexpr std::string_view kOpen = "\xE2\x80\x9C";   // left double quotation mark
  constexpr std::string_view kClose = "\xE2\x80\x9D";  // right double quotation mark
  if (s.size() >= 6 && s.substr(0, 3) == kOpen && s.substr(s.size() - 3) == kClose) {
    return std::string(s.substr(3, s.size() - 6));
  }
  return std::string(s);
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string format_topic_label(const TopicLabelResponse& r) {
  return "===\nThought: " + r.thought + "\nLabel: " + r.label + "\n===";
}

TopicLabelResponse parse_topic_label(std::string_view raw) {
  const std::string s(raw);
  const auto thought_pos = s.find("Thought:");
  const auto search_from = thought_pos == std::string::npos ? 0 : thought_pos;
  const auto label_pos = s.find("Label:", search_from);
  if (label_pos == std::string::npos) {
    throw ParseError("topic response has no 'Label:' line", s);
  }
  TopicLabelResponse out;
  if (thought_pos != std::string::npos) {
    const auto begin = thought_pos + 8;
    out.thought = std::string(text::trim(std::string_view(s).substr(begin, label_pos - begin)));
  }
  auto rest = std::string_view(s).substr(label_pos + 6);
  const auto fence = rest.find("===");
  const auto newline = rest.find('\n');
  rest = rest.substr(0, std::min(fence, newline));
  out.label = std::string(text::trim(rest));
  if (out.label.empty()) throw ParseError("topic response has an empty label", s);
  return out;
}

std::string format_chunk_codebook(const ChunkCodebookResponse& r) {
  std::string out = "===\n";
  for (const auto& e : r.entries) {
    out += "## Label: " + e.label + "\n";
    out += "Definition: " + e.definition + "\n";
    for (const auto& q : e.quotes) out += "- \"" + q + "\"\n";
  }
  return out;
}

ChunkCodebookParse parse_chunk_codebook(std::string_view raw) {
  ChunkCodebookParse out;
  if (text::trim(raw).empty()) {
    out.warnings.emplace_back("empty response");
    return out;
  }
  std::optional<CodebookEntry> current;
  bool in_definition = false;
  std::size_t block = 0;
  auto flush = [&] {
    if (!current) return;
    if (current->label.empty()) {
      out.warnings.push_back("entry " + std::to_string(block) + " has an empty label; skipped");
    } else {
      out.response.entries.push_back(std::move(*current));
    }
    current.reset();
  };
  for (const auto& raw_line : text::split_lines(raw)) {
    const auto line = text::trim(raw_line);
    if (line.empty() || line == "===" || line == "## ...") {
      in_definition = false;
      continue;
    }
    if (line.substr(0, 2) == "##") {
      const auto rest = text::trim(line.substr(2));
      if (starts_with_ci(rest, "label:")) {
        flush();
        ++block;
        current = CodebookEntry{std::string(text::trim(rest.substr(6))), {}, {}};
        in_definition = false;
      }
      continue;
    }
    if (!current) continue;
    if (starts_with_ci(line, "definition:")) {
      current->definition = std::string(text::trim(line.substr(11)));
      in_definition = true;
    } else if (line.substr(0, 2) == "- " || line.substr(0, 2) == "* " || line == "-") {
      current->quotes.push_back(strip_quotes(line.substr(1)));
      in_definition = false;
    } else if (in_definition && current->quotes.empty()) {
      current->definition += " " + std::string(line);
    }
  }
  flush();
  if (out.response.entries.empty()) out.warnings.emplace_back("no codebook entries found");
  return out;
}

std::vector<std::string> split_tags(std::string_view line) {
  std::vector<std::string> tags;
  for (const auto& part : text::split(line, ';')) {
    const auto t = text::trim(part);
    if (!t.empty()) tags.emplace_back(t);
  }
  return tags;
}

std::string format_item_tags(const ItemTagResponse& r, TagVocabulary vocabulary) {
  const char* heading = vocabulary == TagVocabulary::Tags ? "Tags" : "Interpretations";
  std::string out = "===\nThoughts: " + r.thoughts + "\n";
  out += std::string(heading) + " for each message (" + std::to_string(r.tags_per_message.size()) +
         " in total):\n";
  for (std::size_t i = 0; i < r.tags_per_message.size(); ++i) {
    out += std::to_string(i + 1) + ". " + text::join(r.tags_per_message[i], "; ") + "\n";
  }
  out += "Summary: " + r.summary + "\n";
  out += "Notes: " + r.notes;
  return out;
}

ItemTagResponse parse_item_tags(std::string_view raw, std::size_t expected_messages) {
  const std::string s(raw);
  static const std::regex kHeading(R"((Tags|Interpretations) for each message[^\n]*)",
                                   std::regex::icase);
  std::smatch heading;
  if (!std::regex_search(s, heading, kHeading)) {
    throw ParseError("response has no per-message tag list", s);
  }
  ItemTagResponse out;
  const auto heading_begin = static_cast<std::size_t>(heading.position(0));
  const auto thoughts_pos = s.rfind("Thoughts:", heading_begin);
  if (thoughts_pos != std::string::npos) {
    out.thoughts = std::string(
        text::trim(std::string_view(s).substr(thoughts_pos + 9, heading_begin - thoughts_pos - 9)));
  }

  const auto body_begin = heading_begin + static_cast<std::size_t>(heading.length(0));
  auto summary_pos = s.find("\nSummary:", body_begin);
  if (summary_pos == std::string::npos && s.compare(body_begin, 8, "Summary:") == 0) {
    summary_pos = body_begin;
  }
  const auto body = std::string_view(s).substr(
      body_begin, summary_pos == std::string::npos ? std::string::npos : summary_pos - body_begin);

  static const std::regex kNumbered(R"(^\s*(\d+)[.)]\s*(.*)$)");
  std::size_t expected_number = 1;
  for (const auto& line : text::split_lines(body)) {
    std::smatch m;
    if (!std::regex_match(line, m, kNumbered)) continue;
    const auto number = std::stoul(m[1].str());
    if (number != expected_number) {
      throw ParseError("unexpected message number " + std::to_string(number) + " (expected " +
                           std::to_string(expected_number) + ")",
                       s);
    }
    auto tags = split_tags(m[2].str());
    if (tags.empty()) {
      throw ParseError("message " + std::to_string(number) + " has no tags", s);
    }
    out.tags_per_message.push_back(std::move(tags));
    ++expected_number;
  }
  if (out.tags_per_message.size() != expected_messages) {
    throw ParseError("tag-count mismatch (got " + std::to_string(out.tags_per_message.size()) +
                         ", expected " + std::to_string(expected_messages) + ")",
                     s);
  }

  if (summary_pos != std::string::npos) {
    const auto summary_begin = s.find("Summary:", summary_pos) + 8;
    const auto notes_pos = s.find("Notes:", summary_begin);
    out.summary = std::string(text::trim(std::string_view(s).substr(
        summary_begin,
        notes_pos == std::string::npos ? std::string::npos : notes_pos - summary_begin)));
    if (notes_pos != std::string::npos) {
      out.notes = std::string(text::trim(std::string_view(s).substr(notes_pos + 6)));
    }
  }
  return out;
}

}  // namespace incode::coding
