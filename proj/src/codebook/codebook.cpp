#include "incode/codebook/codebook.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "incode/common/text.h"

namespace incode::codebook {

namespace {

struct ApproachInfo {
  Approach approach;
  std::string_view id;
  std::string_view display;
};

constexpr std::array<ApproachInfo, 5> kApproaches{{
    {Approach::Topic, "topic", "Topic Modeling + LLM"},
    {Approach::Chunk, "chunk", "Chunk-Level LLM Coding"},
    {Approach::Item, "item", "Item-Level LLM Coding"},
    {Approach::Verb, "verb", "Item-Level Coding w/ Verb Phrases"},
    {Approach::Human, "human", "4 Human Coders"},
}};

const ApproachInfo& info(Approach a) {
  for (const auto& i : kApproaches) {
    if (i.approach == a) return i;
  }
  throw Error("unknown approach");
}

}  // namespace

std::string_view to_string(Approach a) { return info(a).id; }
std::string_view display_name(Approach a) { return info(a).display; }

std::optional<Approach> parse_approach(std::string_view s) {
  for (const auto& i : kApproaches) {
    if (i.id == s) return i.approach;
  }
  return std::nullopt;
}

std::string normalize_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (const char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::ispunct(c)) {
      out.push_back(' ');
    } else if (c < 0x80) {
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      out.push_back(ch);
    }
  }
  out = text::collapse_whitespace(out);
  if (out.empty()) throw Error("label empty after normalization");
  return out;
}

Codebook::Codebook(Approach approach, std::vector<Code> codes, RunMetadata metadata)
    : approach_(approach), codes_(std::move(codes)), metadata_(std::move(metadata)) {
  for (auto& code : codes_) {
    if (code.normalized_label != normalize_label(code.display_label)) {
      throw CodebookError("code '" + code.display_label + "' has normalized label '" +
                          code.normalized_label + "'");
    }
    std::sort(code.examples.begin(), code.examples.end(),
              [](const Example& a, const Example& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < code.examples.size(); ++i) {
      if (code.examples[i].id == code.examples[i - 1].id) {
        throw CodebookError("code '" + code.display_label + "' repeats example " +
                            code.examples[i].id.str());
      }
    }
    std::sort(code.provenance.chunks.begin(), code.provenance.chunks.end());
    code.provenance.chunks.erase(
        std::unique(code.provenance.chunks.begin(), code.provenance.chunks.end()),
        code.provenance.chunks.end());
  }
  std::sort(codes_.begin(), codes_.end(),
            [](const Code& a, const Code& b) { return a.normalized_label < b.normalized_label; });
  for (std::size_t i = 1; i < codes_.size(); ++i) {
    if (codes_[i].normalized_label == codes_[i - 1].normalized_label) {
      throw CodebookError("duplicate code label '" + codes_[i].normalized_label + "'");
    }
  }
}

const Code* Codebook::find(std::string_view label) const {
  std::string key;
  try {
    key = normalize_label(label);
  } catch (const Error&) {
    return nullptr;
  }
  const auto it = std::lower_bound(codes_.begin(), codes_.end(), key,
                                   [](const Code& c, const std::string& k) { return c.normalized_label < k; });
  return it != codes_.end() && it->normalized_label == key ? &*it : nullptr;
}

std::size_t count_codes(const Codebook& codebook) { return codebook.size(); }

}  // namespace incode::codebook
