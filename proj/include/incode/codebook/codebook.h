#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "incode/common/error.h"
#include "incode/common/json_io.h"
#include "incode/corpus/dataset.h"

namespace incode::codebook {

// Human is the reference column of the concept comparison, never produced
// by a pipeline.
enum class Approach { Topic, Chunk, Item, Verb, Human };

inline constexpr Approach kMachineApproaches[] = {Approach::Topic, Approach::Chunk, Approach::Item,
                                                   Approach::Verb};

std::string_view to_string(Approach a);  // "topic", "chunk", ...
std::optional<Approach> parse_approach(std::string_view s);
// Column headings of the overview table.
std::string_view display_name(Approach a);

// Lowercase (ASCII), ASCII punctuation including '-' and '_' to spaces,
// whitespace collapsed and trimmed. Non-ASCII text is kept as is. Throws
// Error("label empty after normalization").
std::string normalize_label(std::string_view raw);

struct Example {
  corpus::MessageId id;
  corpus::SpeakerRole speaker_role = corpus::SpeakerRole::User;
  std::string content;

  bool operator==(const Example&) const = default;
};

struct Provenance {
  Approach approach = Approach::Topic;
  std::vector<std::size_t> chunks;  // sorted, unique

  bool operator==(const Provenance&) const = default;
};

struct CodeFlags {
  bool verb_nonconforming = false;

  bool operator==(const CodeFlags&) const = default;
};

struct Code {
  std::string normalized_label;
  std::string display_label;
  std::optional<std::string> definition;
  std::vector<Example> examples;  // sorted by message id, unique ids
  Provenance provenance;
  CodeFlags flags;

  bool operator==(const Code&) const = default;
};

struct RunMetadata {
  std::string backend;
  std::optional<std::uint64_t> seed;
  std::string config_digest;

  bool operator==(const RunMetadata&) const = default;
};

class CodebookError : public Error {
 public:
  using Error::Error;
};

// Codes sorted by normalized label, labels unique.
class Codebook {
 public:
  Codebook() = default;
  // Sorts codes and examples; throws CodebookError on duplicate labels, an
  // inconsistent normalized label or a repeated example id.
  Codebook(Approach approach, std::vector<Code> codes, RunMetadata metadata);

  Approach approach() const noexcept { return approach_; }
  const std::vector<Code>& codes() const noexcept { return codes_; }
  const RunMetadata& metadata() const noexcept { return metadata_; }
  std::size_t size() const noexcept { return codes_.size(); }
  bool empty() const noexcept { return codes_.empty(); }

  // Lookup by raw or normalized label.
  const Code* find(std::string_view label) const;

  bool operator==(const Codebook&) const = default;

 private:
  Approach approach_ = Approach::Topic;
  std::vector<Code> codes_;
  RunMetadata metadata_;
};

std::size_t count_codes(const Codebook& codebook);

}  // namespace incode::codebook
