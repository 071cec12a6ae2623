#include "incode/topic/labeling.h"

#include <stdexcept>

#include "incode/coding/response_grammar.h"
#include "incode/common/text.h"
#include "incode/llm/templates.h"

namespace incode::topic {

llm::RenderedPrompt render_topic_prompt(const TopicCluster& cluster, const corpus::Dataset& corpus) {
  if (cluster.members.empty()) throw std::invalid_argument("label_topic: cluster has no members");
  corpus.require_research_question();
  std::vector<std::string> quotes;
  for (const auto& id : cluster.members) quotes.push_back("- " + corpus.at(id).content);
  std::vector<std::string> keywords;
  for (const auto& [term, weight] : cluster.keywords) keywords.push_back(term);

  using P = llm::Placeholder;
  return llm::render_prompt(llm::topic_label_template(),
                            {{P::ResearchQuestion, corpus.metadata().research_question},
                             {P::CodingNotes, corpus.metadata().coding_notes},
                             {P::Documents, text::join(quotes, "\n")},
                             {P::Keywords, text::join(keywords, ", ")}});
}

LabeledTopic label_topic(TopicCluster cluster, const corpus::Dataset& corpus, llm::Gateway& gateway) {
  const auto prompt = render_topic_prompt(cluster, corpus);
  auto exchange = gateway.complete(llm::template_names::kTopicLabel, prompt);
  const auto parsed = coding::parse_topic_label(exchange.response);
  cluster.thought = parsed.thought;
  cluster.label = parsed.label;
  return {std::move(cluster), std::move(exchange)};
}

}  // namespace incode::topic
