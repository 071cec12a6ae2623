#include "incode/coding/item_level.h"

#include "incode/llm/templates.h"

namespace incode::coding {

llm::RenderedPrompt render_item_prompt(const segment::Chunk& chunk, const corpus::Dataset& dataset,
                                       const CarryState& carry, bool use_verb_phrases) {
  dataset.require_research_question();
  const auto presented = presented_messages(chunk);
  std::string conversation;
  if (!carry.empty()) {
    conversation = "Previous summary: " + carry.summary + "\nPrevious notes: " + carry.notes + "\n\n";
  }
  conversation += render_conversation(presented, dataset, true);

  using P = llm::Placeholder;
  const auto& tmpl = use_verb_phrases ? llm::verb_phrase_template() : llm::item_tags_template();
  return llm::render_prompt(tmpl, {{P::ResearchQuestion, dataset.metadata().research_question},
                                   {P::CodingNotes, dataset.metadata().coding_notes},
                                   {P::MessagesLength, std::to_string(presented.size())},
                                   {P::Conversation, conversation}});
}

std::vector<std::pair<corpus::MessageId, std::vector<std::string>>> ItemLevelResult::core_tags()
    const {
  std::vector<std::pair<corpus::MessageId, std::vector<std::string>>> out;
  for (std::size_t i = 0; i < presented.size() && i < response.tags_per_message.size(); ++i) {
    if (!presented[i].context) out.emplace_back(presented[i].id, response.tags_per_message[i]);
  }
  return out;
}

ItemLevelResult run_item_level(const segment::Chunk& chunk, const corpus::Dataset& dataset,
                               llm::Gateway& gateway, const CarryState& carry,
                               bool use_verb_phrases) {
  const auto prompt = render_item_prompt(chunk, dataset, carry, use_verb_phrases);
  ItemLevelResult result;
  result.presented = presented_messages(chunk);
  result.exchange = gateway.complete(
      use_verb_phrases ? llm::template_names::kVerbPhrases : llm::template_names::kItemTags, prompt);
  result.response = parse_item_tags(result.exchange.response, result.presented.size());
  result.carry = {result.response.summary, result.response.notes};
  return result;
}

}  // namespace incode::coding
