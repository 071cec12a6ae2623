#include "incode/codebook/merge.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "incode/coding/verb_lexicon.h"
#include "incode/common/text.h"

namespace incode::codebook {

Codebook merge(std::vector<RawCodeInstance> instances, Approach approach,
               const corpus::Dataset& dataset, RunMetadata metadata,
               std::vector<std::string>* warnings) {
  // Canonical order first, so the result cannot depend on arrival order.
  std::sort(instances.begin(), instances.end(), [](const auto& a, const auto& b) {
    return std::tie(a.chunk_index, a.ordinal, a.raw_label, a.message_refs, a.definition) <
           std::tie(b.chunk_index, b.ordinal, b.raw_label, b.message_refs, b.definition);
  });

  std::map<std::string, Code> by_label;
  std::map<std::string, std::set<corpus::MessageId>> refs;
  for (const auto& inst : instances) {
    std::string key;
    try {
      key = normalize_label(inst.raw_label);
    } catch (const Error& e) {
      if (warnings) {
        warnings->push_back("chunk " + std::to_string(inst.chunk_index) + ": dropped label '" +
                            inst.raw_label + "': " + e.what());
      }
      continue;
    }
    auto [it, inserted] = by_label.try_emplace(key);
    Code& code = it->second;
    if (inserted) {
      code.normalized_label = key;
      code.display_label = std::string(text::trim(inst.raw_label));
      code.provenance.approach = approach;
      if (approach == Approach::Verb) code.flags.verb_nonconforming = !coding::check_verb_phrase(key);
    }
    if (!code.definition && inst.definition && !inst.definition->empty()) code.definition = inst.definition;
    code.provenance.chunks.push_back(inst.chunk_index);
    for (const auto& id : inst.message_refs) {
      if (!dataset.contains(id)) throw CodebookError("example " + id.str() + " is not in the dataset");
      refs[key].insert(id);
    }
  }

  std::vector<Code> codes;
  for (auto& [key, code] : by_label) {
    for (const auto& id : refs[key]) {
      const auto& m = dataset.at(id);
      code.examples.push_back({id, m.speaker_role, m.content});
    }
    codes.push_back(std::move(code));
  }
  return Codebook(approach, std::move(codes), std::move(metadata));
}

}  // namespace incode::codebook
