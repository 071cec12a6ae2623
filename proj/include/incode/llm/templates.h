#pragma once

#include <string_view>

#include "incode/llm/prompt_template.h"

namespace incode::llm {

namespace template_names {
inline constexpr std::string_view kTopicLabel = "Topic Modeling + LLM";
inline constexpr std::string_view kChunkCodebook = "Chunk-Level LLM Coding";
inline constexpr std::string_view kItemTags = "Item-Level LLM Coding";
inline constexpr std::string_view kVerbPhrases = "Item-Level Coding w/ Verb Phrases";
}  // namespace template_names

// Cluster labeling: quotes + keywords in, "Thought/Label" out.
const PromptTemplate& topic_label_template();
// Whole-chunk codebook with "## Label:" entries.
const PromptTemplate& chunk_codebook_template();
// Plan first, then numbered tag lists, one per presented message.
const PromptTemplate& item_tags_template();
// item_tags_template() with the verb phrase instruction and the
// tags -> interpretations / tag -> phrase output-template wording.
const PromptTemplate& verb_phrase_template();

// Throws ConfigError for an unknown name.
const PromptTemplate& template_by_name(std::string_view name);

}  // namespace incode::llm
