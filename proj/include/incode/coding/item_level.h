#pragma once

#include <string>
#include <vector>

#include "incode/coding/conversation.h"
#include "incode/coding/response_grammar.h"
#include "incode/corpus/dataset.h"
#include "incode/llm/gateway.h"
#include "incode/segment/segmenter.h"

namespace incode::coding {

struct CarryState {
  std::string summary;
  std::string notes;

  bool empty() const noexcept { return summary.empty() && notes.empty(); }
  bool operator==(const CarryState&) const = default;
};

// A non-empty carry is prefixed to the conversation as
// "Previous summary: ...\nPrevious notes: ...\n\n".
llm::RenderedPrompt render_item_prompt(const segment::Chunk& chunk, const corpus::Dataset& dataset,
                                       const CarryState& carry, bool use_verb_phrases);

struct ItemLevelResult {
  ItemTagResponse response;
  std::vector<PresentedMessage> presented;
  CarryState carry;
  llm::ChatExchange exchange;

  // Tags of core messages only; context tags are parsed but not kept.
  std::vector<std::pair<corpus::MessageId, std::vector<std::string>>> core_tags() const;
};

ItemLevelResult run_item_level(const segment::Chunk& chunk, const corpus::Dataset& dataset,
                               llm::Gateway& gateway, const CarryState& carry,
                               bool use_verb_phrases);

}  // namespace incode::coding
