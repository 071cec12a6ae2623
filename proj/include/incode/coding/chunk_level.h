#pragma once

#include <string>
#include <vector>

#include "incode/coding/response_grammar.h"
#include "incode/corpus/dataset.h"
#include "incode/llm/gateway.h"
#include "incode/segment/segmenter.h"

namespace incode::coding {

llm::RenderedPrompt render_chunk_prompt(const segment::Chunk& chunk, const corpus::Dataset& dataset);

struct ChunkLevelResult {
  ChunkCodebookResponse response;
  std::vector<std::string> warnings;
  llm::ChatExchange exchange;
};

ChunkLevelResult run_chunk_level(const segment::Chunk& chunk, const corpus::Dataset& dataset,
                                 llm::Gateway& gateway);

// Core messages a quote refers to: exact content match first, otherwise
// every core message whose content contains the quote (or vice versa).
// Quotes of fewer than 3 characters match nothing by substring.
std::vector<corpus::MessageId> resolve_quote(const std::string& quote, const segment::Chunk& chunk,
                                             const corpus::Dataset& dataset);

}  // namespace incode::coding
