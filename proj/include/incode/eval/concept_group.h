#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "incode/codebook/codebook.h"

namespace incode::eval {

// Lowercased keyword with one trailing "ing", "ed" or "s" removed.
std::string concept_stem(std::string_view keyword);

struct ConceptGroup {
  std::string keyword;
  std::string stem;
  // One entry per source, in the order given; labels sorted.
  std::vector<std::pair<codebook::Approach, std::vector<std::string>>> members;

  const std::vector<std::string>* find(codebook::Approach a) const;
};

// Codes whose normalized label has a token starting with the stem.
// Throws std::invalid_argument for a blank keyword.
ConceptGroup concept_group(std::string_view keyword, const std::vector<codebook::Codebook>& sources);

}  // namespace incode::eval
