#include "incode/coding/conversation.h"

#include "incode/common/text.h"

namespace incode::coding {

std::vector<PresentedMessage> presented_messages(const segment::Chunk& chunk) {
  std::vector<PresentedMessage> out;
  for (const auto& id : chunk.leading_context_ids) out.push_back({id, true});
  for (const auto& id : chunk.core_ids) out.push_back({id, false});
  for (const auto& id : chunk.trailing_context_ids) out.push_back({id, true});
  return out;
}

std::string render_conversation(const std::vector<PresentedMessage>& messages,
                                const corpus::Dataset& dataset, bool numbered) {
  std::vector<std::string> lines;
  lines.reserve(messages.size());
  for (std::size_t i = 0; i < messages.size(); ++i) {
    std::string line = numbered ? std::to_string(i + 1) + ". " : std::string();
    if (messages[i].context) line += "[context] ";
    // Multi-line content would break line-oriented parsing downstream.
    line += text::replace_all(dataset.at(messages[i].id).render(), "\n", " ");
    lines.push_back(std::move(line));
  }
  return text::join(lines, "\n");
}

}  // namespace incode::coding
