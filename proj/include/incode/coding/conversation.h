#pragma once

#include <string>
#include <vector>

#include "incode/corpus/dataset.h"
#include "incode/segment/segmenter.h"

namespace incode::coding {

struct PresentedMessage {
  corpus::MessageId id;
  bool context = false;
};

// Leading context, core, trailing context, in dataset order.
std::vector<PresentedMessage> presented_messages(const segment::Chunk& chunk);

// One line per message: "[context] 2-3: Designer: ..." for context lines,
// "2-3: Designer: ..." otherwise. With `numbered`, lines get a "k. " prefix
// starting at 1.
std::string render_conversation(const std::vector<PresentedMessage>& messages,
                                const corpus::Dataset& dataset, bool numbered);

}  // namespace incode::coding
