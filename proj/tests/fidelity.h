#pragma once

#include <regex>
#include <string>
#include <vector>

#include "incode/common/json_io.h"
#include "incode/common/text.h"
#include "incode/llm/prompt_template.h"
#include "incode/llm/templates.h"
#include "support.h"

// Prompt fidelity checks against transcribed template texts in
// tests/data/templates, compared modulo whitespace.
namespace incode::testing {

inline std::string reference_text(const std::string& name) {
  return text::collapse_whitespace(read_text_file(source_dir() / "tests" / "data" / "templates" / (name + ".txt")));
}

// Naive substitution of every placeholder spelling, independent of the
// template engine.
inline std::string substitute(std::string s, const llm::Bindings& bindings) {
  for (const auto& [p, value] : bindings) {
    const auto name = std::string(llm::placeholder_name(p));
    for (const auto& token : {"${" + name + "}", "#{" + name + "}", "{" + name + "}"}) {
      s = text::replace_all(std::move(s), token, value);
    }
  }
  return s;
}

inline llm::Bindings sample_bindings() {
  using P = llm::Placeholder;
  return {{P::ResearchQuestion, "How did Physics Lab's online community emerge?"},
          {P::CodingNotes, "Designers and teachers talk about the software."},
          {P::MessagesLength, "36"},
          {P::Documents, "- Hello everyone\n- Hello :)"},
          {P::Keywords, "hello, everyone"},
          {P::Conversation, "2-58: User: Hello everyone\n2-59: Designer: Hello :)"}};
}

struct FidelityResult {
  bool ok = true;
  std::vector<std::string> failures;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      failures.push_back(what);
    }
  }
};

// The verb-phrase prompt must equal the item-level prompt after exactly two
// edits: the verb-phrase sentence, and tags -> interpretations / tag -> phrase
// in the output template.
inline std::string apply_verb_edits(std::string item_system) {
  const std::string anchor = "generalizability across messages. ";
  const auto at = item_system.find(anchor);
  if (at == std::string::npos) return item_system;
  item_system.insert(at + anchor.size(), "Always use verb phrases. ");
  const auto output = item_system.find("Always follow the output format:");
  auto head = item_system.substr(0, output);
  auto tail = item_system.substr(output);
  tail = text::replace_all(tail, "Tags for each message", "Interpretations for each message");
  tail = std::regex_replace(tail, std::regex(R"(\btag (\d))"), "phrase $1");
  return head + tail;
}

inline FidelityResult check_prompt_fidelity() {
  FidelityResult r;
  const auto b = sample_bindings();
  const auto render = [&](const llm::PromptTemplate& t) { return llm::render_prompt(t, b); };
  const auto same = [](const std::string& rendered, const std::string& expected) {
    return text::collapse_whitespace(rendered) == text::collapse_whitespace(expected);
  };

  const auto topic = render(llm::topic_label_template());
  r.expect(same(topic.system, substitute(reference_text("topic_system"), b)), "topic system prompt");
  r.expect(same(topic.user, substitute(reference_text("topic_user"), b)), "topic user prompt");

  const auto chunk = render(llm::chunk_codebook_template());
  r.expect(same(chunk.system, substitute(reference_text("chunk_system"), b)), "chunk system prompt");
  r.expect(same(chunk.user, substitute(reference_text("chunk_user"), b)), "chunk user prompt");

  const auto item = render(llm::item_tags_template());
  r.expect(same(item.system, substitute(reference_text("item_system"), b)), "item system prompt");
  r.expect(same(item.user, substitute("{Conversation}", b)), "item user prompt");

  const auto verb = render(llm::verb_phrase_template());
  r.expect(verb.system == apply_verb_edits(item.system), "verb prompt is item prompt plus the two edits");
  r.expect(verb.user == item.user, "verb user prompt equals item user prompt");
  r.expect(verb.system != item.system, "verb prompt differs from item prompt");
  // Undoing the two edits restores the item prompt exactly.
  auto undone = text::replace_all(verb.system, "Always use verb phrases. ", "");
  undone = text::replace_all(undone, "Interpretations for each message", "Tags for each message");
  undone = std::regex_replace(undone, std::regex(R"(\bphrase (\d))"), "tag $1");
  r.expect(undone == item.system, "reverting the two edits gives the item prompt");

  for (const auto* p : {&topic, &chunk, &item, &verb}) {
    for (const auto& s : {p->system, p->user}) {
      r.expect(s.find("{ResearchQuestion}") == std::string::npos && s.find("{Messages.length}") == std::string::npos &&
                   s.find("{Conversation}") == std::string::npos,
               "no placeholder left after rendering");
    }
  }
  return r;
}

}  // namespace incode::testing
