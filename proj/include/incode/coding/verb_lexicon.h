#pragma once

#include <set>
#include <string>
#include <string_view>

namespace incode::coding {

class VerbLexicon {
 public:
  explicit VerbLexicon(std::set<std::string> verbs) : verbs_(std::move(verbs)) {}
  // One base form per line; blank lines and '#' comments are skipped.
  static VerbLexicon from_text(std::string_view text);
  // The list shipped in data/verb_lexicon.txt.
  static const VerbLexicon& bundled();

  bool contains(std::string_view word) const { return verbs_.count(std::string(word)) != 0; }
  std::size_t size() const noexcept { return verbs_.size(); }

 private:
  std::set<std::string> verbs_;
};

// True iff the first token of the normalized label is a lexicon verb.
// Throws std::invalid_argument when the label normalizes to nothing.
bool check_verb_phrase(std::string_view label, const VerbLexicon& lexicon = VerbLexicon::bundled());

}  // namespace incode::coding
