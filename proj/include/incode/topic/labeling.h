#pragma once

#include "incode/corpus/dataset.h"
#include "incode/llm/exchange.h"
#include "incode/llm/gateway.h"
#include "incode/llm/prompt_template.h"
#include "incode/topic/clustering.h"

namespace incode::topic {

// Quotes as "- content" lines in member order; keywords comma-separated.
llm::RenderedPrompt render_topic_prompt(const TopicCluster& cluster, const corpus::Dataset& corpus);

struct LabeledTopic {
  TopicCluster cluster;
  llm::ChatExchange exchange;
};

// Membership and keywords pass through untouched. Throws ParseError (with
// the raw response) when the label is missing or empty.
LabeledTopic label_topic(TopicCluster cluster, const corpus::Dataset& corpus, llm::Gateway& gateway);

}  // namespace incode::topic
