#include "incode/llm/templates.h"

#include <string>

namespace incode::llm {

namespace {

using P = Placeholder;

constexpr const char* kTopicSystem =
    "You are an expert in thematic analysis with grounded theory, working on open coding. "
    "You identified a topic from the input quotes. Each quote is independent from another. "
    "#{ResearchQuestion} #{CodingNotes}\n"
    "\n"
    "Always follow the output format:\n"
    "===\n"
    "Thought: {What is the most common theme among the input quotes? Do not over-interpret the "
    "data.}\n"
    "Label: {A single label that faithfully describes the topic}\n"
    "===";

constexpr const char* kTopicUser =
    "Quotes:\n"
    "{Documents}\n"
    "Keywords: {Keywords}";

constexpr const char* kChunkSystem =
    "Hi ChatGPT, I want to analyze the following interaction in one of Physics Lab's online "
    "message groups. Please give me a codebook to analyze factors within this interaction that "
    "could contribute to the research. #{ResearchQuestion} #{CodingNotes}\n"
    "\n"
    "For each code, try to find 3 quotes. Always follow the output format:\n"
    "===\n"
    "## Label: A label of code 1\n"
    "Definition: A definition of code 1\n"
    "- \"Example quote 1\"\n"
    "- \"Example quote 2\"\n"
    "## ...";

constexpr const char* kChunkUser = "{Conversation}";

constexpr const char* kItemSystem =
    "You are an expert in thematic analysis with grounded theory, working on open coding. "
    "Your goal is to identify multiple low-level tags for each message. When writing tags, "
    "balance between specifics and generalizability across messages. "
    "${ResearchQuestion} ${CodingNotes}\n"
    "\n"
    "Always follow the output format:\n"
    "===\n"
    "Thoughts: {A paragraph of plans and guiding questions about analyzing the conversation from "
    "multiple theoretical angles}\n"
    "Tags for each message (${Messages.length} in total):\n"
    "1. tag 1; tag 2; tag 3...\n"
    "...\n"
    "${Messages.length}. tag 4; tag 5; tag 6...\n"
    "Summary: {A somehow detailed summary of the conversation, including previous ones}\n"
    "Notes: {Notes and hypotheses about the conversation until now}";

constexpr const char* kVerbSystem =
    "You are an expert in thematic analysis with grounded theory, working on open coding. "
    "Your goal is to identify multiple low-level tags for each message. When writing tags, "
    "balance between specifics and generalizability across messages. Always use verb phrases. "
    "${ResearchQuestion} ${CodingNotes}\n"
    "\n"
    "Always follow the output format:\n"
    "===\n"
    "Thoughts: {A paragraph of plans and guiding questions about analyzing the conversation from "
    "multiple theoretical angles}\n"
    "Interpretations for each message (${Messages.length} in total):\n"
    "1. phrase 1; phrase 2; phrase 3...\n"
    "...\n"
    "${Messages.length}. phrase 4; phrase 5; phrase 6...\n"
    "Summary: {A somehow detailed summary of the conversation, including previous ones}\n"
    "Notes: {Notes and hypotheses about the conversation until now}";

constexpr const char* kItemUser = "{Conversation}";

}  // namespace

const PromptTemplate& topic_label_template() {
  static const PromptTemplate t(std::string(template_names::kTopicLabel), kTopicSystem, kTopicUser,
                                {P::ResearchQuestion, P::CodingNotes, P::Documents, P::Keywords});
  return t;
}

const PromptTemplate& chunk_codebook_template() {
  static const PromptTemplate t(std::string(template_names::kChunkCodebook), kChunkSystem,
                                kChunkUser, {P::ResearchQuestion, P::CodingNotes, P::Conversation});
  return t;
}

const PromptTemplate& item_tags_template() {
  static const PromptTemplate t(std::string(template_names::kItemTags), kItemSystem, kItemUser,
                                {P::ResearchQuestion, P::CodingNotes, P::MessagesLength,
                                 P::Conversation});
  return t;
}

const PromptTemplate& verb_phrase_template() {
  static const PromptTemplate t(std::string(template_names::kVerbPhrases), kVerbSystem, kItemUser,
                                {P::ResearchQuestion, P::CodingNotes, P::MessagesLength,
                                 P::Conversation});
  return t;
}

const PromptTemplate& template_by_name(std::string_view name) {
  for (const auto* t : {&topic_label_template(), &chunk_codebook_template(), &item_tags_template(),
                        &verb_phrase_template()}) {
    if (t->name() == name) return *t;
  }
  throw ConfigError("unknown prompt template '" + std::string(name) + "'");
}

}  // namespace incode::llm
