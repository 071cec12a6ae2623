#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "incode/common/error.h"

namespace incode::coding {

// "=== Thought: ... Label: ... ==="
struct TopicLabelResponse {
  std::string thought;
  std::string label;

  bool operator==(const TopicLabelResponse&) const = default;
};

std::string format_topic_label(const TopicLabelResponse& response);
// Throws ParseError when "Label:" is missing or empty.
TopicLabelResponse parse_topic_label(std::string_view raw);

struct CodebookEntry {
  std::string label;
  std::string definition;
  std::vector<std::string> quotes;

  bool operator==(const CodebookEntry&) const = default;
};

struct ChunkCodebookResponse {
  std::vector<CodebookEntry> entries;

  bool operator==(const ChunkCodebookResponse&) const = default;
};

struct ChunkCodebookParse {
  ChunkCodebookResponse response;
  std::vector<std::string> warnings;
};

std::string format_chunk_codebook(const ChunkCodebookResponse& response);
// Lenient: quotes and definitions may be missing, blocks without a label are
// skipped with a warning, and an empty or entry-less response yields zero
// entries plus a warning.
ChunkCodebookParse parse_chunk_codebook(std::string_view raw);

struct ItemTagResponse {
  std::string thoughts;
  std::vector<std::vector<std::string>> tags_per_message;
  std::string summary;
  std::string notes;

  bool operator==(const ItemTagResponse&) const = default;
};

// Heading wording of the numbered list.
enum class TagVocabulary { Tags, Interpretations };

std::string format_item_tags(const ItemTagResponse& response, TagVocabulary vocabulary);

// Numbered lines "k. a; b; c" split on ';' with trimming. Throws ParseError
// on a missing list, a numbering gap, a message with no tags, or
// "tag-count mismatch (got G, expected E)".
ItemTagResponse parse_item_tags(std::string_view raw, std::size_t expected_messages);

std::vector<std::string> split_tags(std::string_view line);

}  // namespace incode::coding
