#include <doctest.h>

#include <random>

#include "grammar_gen.h"
#include "incode/coding/chunk_level.h"
#include "incode/coding/conversation.h"
#include "incode/coding/item_level.h"
#include "incode/coding/response_grammar.h"
#include "incode/coding/verb_lexicon.h"
#include "stub_backend.h"
#include "support.h"

using namespace incode;
using namespace incode::coding;

namespace {

segment::Chunk chunk_of(std::vector<corpus::MessageId> core, std::vector<corpus::MessageId> lead = {},
                        std::vector<corpus::MessageId> trail = {}) {
  segment::Chunk c;
  c.core_ids = std::move(core);
  c.leading_context_ids = std::move(lead);
  c.trailing_context_ids = std::move(trail);
  return c;
}

}  // namespace

TEST_CASE("topic label responses round-trip") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto r = testing::random_topic_label(rng);
    REQUIRE(parse_topic_label(format_topic_label(r)) == r);
  }
}

TEST_CASE("chunk codebook responses round-trip") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto r = testing::random_chunk_codebook(rng);
    const auto parsed = parse_chunk_codebook(format_chunk_codebook(r));
    REQUIRE(parsed.response == r);
    CHECK(parsed.warnings.empty());
  }
}

TEST_CASE("item tag responses round-trip under both vocabularies") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto r = testing::random_item_tags(rng);
    const auto vocab = i % 2 ? TagVocabulary::Interpretations : TagVocabulary::Tags;
    REQUIRE(parse_item_tags(format_item_tags(r, vocab), r.tags_per_message.size()) == r);
  }
}

TEST_CASE("a missing numbered line is a tag-count mismatch") {
  ItemTagResponse r;
  for (int i = 0; i < 35; ++i) r.tags_per_message.push_back({"tag 1", "tag 2"});
  const auto raw = format_item_tags(r, TagVocabulary::Tags);
  CHECK_THROWS_WITH_AS(parse_item_tags(raw, 36), "tag-count mismatch (got 35, expected 36)", ParseError);
  try {
    parse_item_tags(raw, 36);
  } catch (const ParseError& e) {
    CHECK(e.raw() == raw);
  }
}

TEST_CASE("item tag parsing") {
  const auto r = parse_item_tags("Tags for each message (1 in total):\n1. tag 1; tag 2; tag 3\n", 1);
  CHECK(r.tags_per_message.at(0) == std::vector<std::string>{"tag 1", "tag 2", "tag 3"});
  CHECK(split_tags(" a ;; b c ; ") == std::vector<std::string>{"a", "b c"});
  CHECK_THROWS_AS(parse_item_tags("Tags for each message:\n1. a\n3. b\n", 2), ParseError);
  CHECK_THROWS_AS(parse_item_tags("Tags for each message:\n1. ;  ;\n", 1), ParseError);
  CHECK_THROWS_AS(parse_item_tags("no list here", 0), ParseError);
}

TEST_CASE("chunk codebook parsing is lenient about quotes") {
  const auto role = parse_chunk_codebook(
      "## Label: role identification\nDefinition: Asking who someone is.\n- \"I'll upload one now... Are you a teacher?\"");
  REQUIRE(role.response.entries.size() == 1);
  CHECK(role.response.entries[0].label == "role identification");
  CHECK(role.response.entries[0].quotes.at(0) == "I'll upload one now... Are you a teacher?");

  const auto bare = parse_chunk_codebook("## Label: feature announcements\nDefinition: News.\n");
  REQUIRE(bare.response.entries.size() == 1);
  CHECK(bare.response.entries[0].quotes.empty());

  const auto empty = parse_chunk_codebook("");
  CHECK(empty.response.entries.empty());
  CHECK_FALSE(empty.warnings.empty());

  const auto unlabeled = parse_chunk_codebook("## Label:\nDefinition: x\n## Label: y\n");
  CHECK(unlabeled.response.entries.size() == 1);
  CHECK(unlabeled.warnings.size() == 1);
}

TEST_CASE("conversation rendering marks context and numbers lines") {
  const auto ds = testing::study_dataset();
  const auto chunk = chunk_of({{2, 3}, {2, 4}}, {{2, 2}}, {{2, 5}});
  const auto presented = presented_messages(chunk);
  REQUIRE(presented.size() == 4);
  CHECK(presented[0].context);
  CHECK_FALSE(presented[1].context);
  CHECK(presented[3].context);
  const auto numbered = render_conversation(presented, ds, true);
  CHECK(numbered.find("2. 2-3: Designer: I'll upload one now... Are you a teacher?") != std::string::npos);
  CHECK(numbered.find("1. [context] 2-2:") != std::string::npos);
  const auto plain = render_conversation(presented, ds, false);
  CHECK(plain.find("\n2-4: User: Yes.") != std::string::npos);
}

TEST_CASE("chunk-level coding over a stub response") {
  const auto ds = testing::study_dataset();
  const auto chunk = chunk_of({{2, 3}, {2, 4}}, {{2, 2}});
  auto stub = std::make_shared<testing::StubBackend>(std::vector<std::string>{
      "===\n## Label: role identification\nDefinition: Identifying roles.\n- \"I'll upload one now... Are you a "
      "teacher?\"\n"});
  llm::Gateway gateway(stub);
  const auto r = run_chunk_level(chunk, ds, gateway);
  REQUIRE(r.response.entries.size() == 1);
  CHECK(resolve_quote(r.response.entries[0].quotes[0], chunk, ds) == std::vector<corpus::MessageId>{{2, 3}});
  CHECK(stub->requests[0].user.find("[context] 2-2") != std::string::npos);
  CHECK(r.exchange.template_name == "Chunk-Level LLM Coding");
}

TEST_CASE("quote resolution") {
  const auto ds = testing::study_dataset();
  const auto chunk = chunk_of({{2, 3}, {2, 4}}, {{2, 2}});
  CHECK(resolve_quote("Are you a teacher?", chunk, ds) == std::vector<corpus::MessageId>{{2, 3}});
  CHECK(resolve_quote("Yes.", chunk, ds) == std::vector<corpus::MessageId>{{2, 4}});
  CHECK(resolve_quote("zz", chunk, ds).empty());
  CHECK(resolve_quote("", chunk, ds).empty());
  // Context messages are never resolved.
  CHECK(resolve_quote(ds.at({2, 2}).content, chunk, ds).empty());
}

TEST_CASE("item-level coding keeps core tags and hands back carry state") {
  const auto ds = testing::study_dataset();
  const auto chunk = chunk_of({{2, 3}, {2, 4}}, {{2, 2}}, {{2, 5}});
  auto mock = std::make_shared<llm::MockBackend>(7);
  llm::Gateway gateway(mock);
  const auto r = run_item_level(chunk, ds, gateway, {}, false);
  CHECK(r.response.tags_per_message.size() == 4);
  const auto core = r.core_tags();
  REQUIRE(core.size() == 2);
  CHECK(core[0].first == corpus::MessageId{2, 3});
  CHECK(core[0].second.front() == "t2a");
  CHECK(core[1].second.front() == "t3a");
  CHECK(r.carry == CarryState{r.response.summary, r.response.notes});
  CHECK_FALSE(r.carry.empty());
  CHECK(r.exchange.system.find("(4 in total)") != std::string::npos);
}

TEST_CASE("carry state is the only thing that crosses chunks") {
  const auto ds = testing::study_dataset();
  const auto first = chunk_of({{2, 3}});
  const auto second = chunk_of({{2, 4}});
  auto stub = std::make_shared<testing::StubBackend>(std::vector<std::string>{
      "Thoughts: plan\nTags for each message (1 in total):\n1. distinctive secret tag\nSummary: they met\nNotes: "
      "roles matter",
      "Thoughts: plan\nTags for each message (1 in total):\n1. reply\nSummary: s\nNotes: n"});
  llm::Gateway gateway(stub);
  const auto a = run_item_level(first, ds, gateway, {}, false);
  CHECK(stub->requests[0].user.find("Previous summary") == std::string::npos);
  run_item_level(second, ds, gateway, a.carry, false);
  const auto& user = stub->requests[1].user;
  CHECK(user.rfind("Previous summary: they met\nPrevious notes: roles matter\n\n1. 2-4: User: Yes.", 0) == 0);
  CHECK(user.find("distinctive secret tag") == std::string::npos);
  CHECK(stub->requests[1].system.find("distinctive secret tag") == std::string::npos);
}

TEST_CASE("verb variant uses the verb template") {
  const auto ds = testing::sample_dataset();
  segment::Chunk c;
  for (const auto& m : ds.messages()) c.core_ids.push_back(m.id);
  const auto item = render_item_prompt(c, ds, {}, false);
  const auto verb = render_item_prompt(c, ds, {}, true);
  CHECK(verb.system.find("Always use verb phrases.") != std::string::npos);
  CHECK(item.system.find("Always use verb phrases.") == std::string::npos);
  CHECK(verb.system.find("Interpretations for each message (36 in total)") != std::string::npos);
  CHECK(verb.user == item.user);
}

TEST_CASE("verb phrase conformance") {
  CHECK(check_verb_phrase("acknowledge feedback"));
  CHECK(check_verb_phrase("Request-specific feedback"));
  CHECK_FALSE(check_verb_phrase("emoji"));
  CHECK_FALSE(check_verb_phrase("user feedback"));
  CHECK_THROWS_AS(check_verb_phrase(""), std::invalid_argument);
  CHECK_THROWS_AS(check_verb_phrase(" -- "), std::invalid_argument);
  CHECK(VerbLexicon::bundled().size() > 500);
  const auto small = VerbLexicon::from_text("# verbs\nrun\n\n walk \n");
  CHECK(small.size() == 2);
  CHECK(check_verb_phrase("walk home", small));
}
