#include "incode/coding/verb_lexicon.h"

#include <stdexcept>

#include "incode/codebook/codebook.h"
#include "incode/common/text.h"

namespace incode::coding {

namespace detail {
extern const std::string_view kVerbLexiconText;
}

VerbLexicon VerbLexicon::from_text(std::string_view text) {
  std::set<std::string> verbs;
  for (const auto& line : text::split_lines(text)) {
    const auto word = text::to_lower_ascii(text::trim(line));
    if (!word.empty() && word.front() != '#') verbs.insert(word);
  }
  return VerbLexicon(std::move(verbs));
}

const VerbLexicon& VerbLexicon::bundled() {
  static const VerbLexicon lexicon = from_text(detail::kVerbLexiconText);
  return lexicon;
}

bool check_verb_phrase(std::string_view label, const VerbLexicon& lexicon) {
  std::string normalized;
  try {
    normalized = codebook::normalize_label(label);
  } catch (const Error& e) {
    throw std::invalid_argument(e.what());
  }
  const auto space = normalized.find(' ');
  return lexicon.contains(std::string_view(normalized).substr(0, space));
}

}  // namespace incode::coding
