#include "incode/coding/chunk_level.h"

#include "incode/coding/conversation.h"
#include "incode/common/text.h"
#include "incode/llm/templates.h"

namespace incode::coding {

llm::RenderedPrompt render_chunk_prompt(const segment::Chunk& chunk, const corpus::Dataset& dataset) {
  dataset.require_research_question();
  using P = llm::Placeholder;
  return llm::render_prompt(
      llm::chunk_codebook_template(),
      {{P::ResearchQuestion, dataset.metadata().research_question},
       {P::CodingNotes, dataset.metadata().coding_notes},
       {P::Conversation, render_conversation(presented_messages(chunk), dataset, false)}});
}

ChunkLevelResult run_chunk_level(const segment::Chunk& chunk, const corpus::Dataset& dataset,
                                 llm::Gateway& gateway) {
  const auto prompt = render_chunk_prompt(chunk, dataset);
  ChunkLevelResult result;
  result.exchange = gateway.complete(llm::template_names::kChunkCodebook, prompt);
  auto parsed = parse_chunk_codebook(result.exchange.response);
  result.response = std::move(parsed.response);
  result.warnings = std::move(parsed.warnings);
  return result;
}

std::vector<corpus::MessageId> resolve_quote(const std::string& quote, const segment::Chunk& chunk,
                                             const corpus::Dataset& dataset) {
  const auto needle = text::collapse_whitespace(quote);
  if (needle.empty()) return {};
  std::vector<corpus::MessageId> exact;
  std::vector<corpus::MessageId> partial;
  for (const auto& id : chunk.core_ids) {
    const auto content = text::collapse_whitespace(dataset.at(id).content);
    if (content == needle) {
      exact.push_back(id);
    } else if (needle.size() >= 3 && !content.empty() &&
               (content.find(needle) != std::string::npos ||
                (content.size() >= 3 && needle.find(content) != std::string::npos))) {
      partial.push_back(id);
    }
  }
  return exact.empty() ? partial : exact;
}

}  // namespace incode::coding
