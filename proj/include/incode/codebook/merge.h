#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "incode/codebook/codebook.h"
#include "incode/corpus/dataset.h"

namespace incode::codebook {

// One label as emitted for one chunk. `ordinal` is the position of the
// emission within its chunk's output.
struct RawCodeInstance {
  std::string raw_label;
  std::size_t chunk_index = 0;
  std::size_t ordinal = 0;
  std::vector<corpus::MessageId> message_refs;
  std::optional<std::string> definition;

  bool operator==(const RawCodeInstance&) const = default;
};

// Groups instances by normalized label (exact match only, no synonym
// folding). The first instance in (chunk, ordinal) order provides the
// display label; the first non-empty definition wins. Labels that normalize
// to nothing are dropped with a warning. For the verb approach, labels not
// starting with a lexicon verb are flagged but kept.
Codebook merge(std::vector<RawCodeInstance> instances, Approach approach,
               const corpus::Dataset& dataset, RunMetadata metadata = {},
               std::vector<std::string>* warnings = nullptr);

}  // namespace incode::codebook
