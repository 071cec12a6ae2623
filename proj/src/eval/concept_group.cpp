#include "incode/eval/concept_group.h"

#include <stdexcept>

#include "incode/common/text.h"

namespace incode::eval {

std::string concept_stem(std::string_view keyword) {
  auto stem = text::to_lower_ascii(text::trim(keyword));
  for (const std::string_view suffix : {"ing", "ed", "s"}) {
    if (stem.size() > suffix.size() && stem.ends_with(suffix)) {
      stem.resize(stem.size() - suffix.size());
      break;
    }
  }
  return stem;
}

const std::vector<std::string>* ConceptGroup::find(codebook::Approach a) const {
  for (const auto& [approach, labels] : members) {
    if (approach == a) return &labels;
  }
  return nullptr;
}

ConceptGroup concept_group(std::string_view keyword, const std::vector<codebook::Codebook>& sources) {
  ConceptGroup group;
  group.keyword = std::string(text::trim(keyword));
  if (group.keyword.empty()) throw std::invalid_argument("concept keyword is empty");
  group.stem = concept_stem(group.keyword);
  for (const auto& source : sources) {
    std::vector<std::string> labels;
    for (const auto& code : source.codes()) {
      for (const auto& token : text::split(code.normalized_label, ' ')) {
        if (token.starts_with(group.stem)) {
          labels.push_back(code.normalized_label);
          break;
        }
      }
    }
    group.members.emplace_back(source.approach(), std::move(labels));
  }
  return group;
}

}  // namespace incode::eval
