#include <algorithm>
#include <random>
#include <regex>

#include "incode/coding/response_grammar.h"
#include "incode/common/digest.h"
#include "incode/common/text.h"
#include "incode/llm/gateway.h"
#include "incode/llm/templates.h"

namespace incode::llm {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, const ChatRequest& request) {
  const auto digest = sha256_hex(std::to_string(seed) + '\0' + request.template_name + '\0' +
                                 request.system + '\0' + request.user);
  return std::mt19937_64(std::stoull(digest.substr(0, 16), nullptr, 16));
}

// Portable draws: std::uniform_int_distribution is implementation-defined.
std::size_t draw(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

std::string hex_token(std::mt19937_64& rng) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  auto v = rng();
  for (int i = 0; i < 6; ++i, v >>= 4) s.push_back(kHex[v & 0xF]);
  return s;
}

std::size_t presented_count(const std::string& system) {
  static const std::regex kTotal(R"(\((\d+) in total\))");
  std::smatch m;
  if (std::regex_search(system, m, kTotal)) return std::stoul(m[1].str());
  return 0;
}

// Content of "N. [context] id: role: content" / "id: role: content" lines,
// skipping context lines.
std::vector<std::string> core_contents(const std::string& user) {
  static const std::regex kLine(R"(^(?:\d+\.\s+)?(\[context\]\s+)?\d+-\d+: (?:Designer|User): (.*)$)");
  std::vector<std::string> out;
  for (const auto& line : text::split_lines(user)) {
    std::smatch m;
    if (std::regex_match(line, m, kLine) && !m[1].matched) {
      const auto content = std::string(text::trim(m[2].str()));
      if (!content.empty() && content.find('"') == std::string::npos) out.push_back(content);
    }
  }
  return out;
}

std::string mock_topic(std::mt19937_64& rng, const ChatRequest& request) {
  std::size_t quotes = 0;
  for (const auto& line : text::split_lines(request.user)) {
    if (line.rfind("- ", 0) == 0) ++quotes;
  }
  const auto tag = hex_token(rng);
  return coding::format_topic_label(
      {"Mock theme " + tag + " shared by " + std::to_string(quotes) + " quotes.", "topic " + tag});
}

std::string mock_chunk(std::mt19937_64& rng, const ChatRequest& request) {
  const auto contents = core_contents(request.user);
  std::vector<std::size_t> codes(12);
  for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = i;
  coding::ChunkCodebookResponse r;
  const auto n = draw(rng, 1, 3);
  for (std::size_t e = 0; e < n; ++e) {
    const auto pick = draw(rng, e, codes.size() - 1);
    std::swap(codes[e], codes[pick]);
    coding::CodebookEntry entry;
    entry.label = "code " + std::to_string(codes[e]);
    entry.definition = "Mock definition of code " + std::to_string(codes[e]) + ".";
    if (!contents.empty()) {
      const auto q = draw(rng, 0, 3);
      for (std::size_t k = 0; k < q; ++k) entry.quotes.push_back(contents[draw(rng, 0, contents.size() - 1)]);
    }
    r.entries.push_back(std::move(entry));
  }
  return coding::format_chunk_codebook(r);
}

std::string mock_item(std::mt19937_64& rng, const ChatRequest& request, bool verb) {
  const auto n = presented_count(request.system);
  coding::ItemTagResponse r;
  r.thoughts = "Mock plan " + hex_token(rng) + ".";
  for (std::size_t i = 1; i <= n; ++i) {
    const auto count = draw(rng, 1, 3);
    std::vector<std::string> tags;
    for (std::size_t k = 0; k < count; ++k) {
      const auto letter = std::string(1, static_cast<char>('a' + k));
      const auto idx = std::to_string(i);
      tags.push_back(verb ? "verb" + idx + " phrase" + idx + letter : "t" + idx + letter);
    }
    r.tags_per_message.push_back(std::move(tags));
  }
  r.summary = "Mock summary of " + std::to_string(n) + " messages.";
  r.notes = "Mock notes " + hex_token(rng) + ".";
  return coding::format_item_tags(r, verb ? coding::TagVocabulary::Interpretations
                                           : coding::TagVocabulary::Tags);
}

}  // namespace

std::string MockBackend::respond(const ChatRequest& request) {
  auto rng = seeded_engine(seed_, request);
  if (request.template_name == template_names::kTopicLabel) return mock_topic(rng, request);
  if (request.template_name == template_names::kChunkCodebook) return mock_chunk(rng, request);
  if (request.template_name == template_names::kItemTags) return mock_item(rng, request, false);
  if (request.template_name == template_names::kVerbPhrases) return mock_item(rng, request, true);
  return "===\nMock response " + hex_token(rng) + "\n===";
}

}  // namespace incode::llm
