#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "incode/codebook/codebook.h"
#include "incode/eval/annotation_store.h"

namespace incode::app {

// On-disk layout:
//   codebooks/<approach>.codebook.json
//   responses/<approach>.responses.json
//   annotations/{annotations.json,events.jsonl}
//   manifest.json
class Workspace {
 public:
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path codebook_path(codebook::Approach a) const;
  std::filesystem::path responses_path(codebook::Approach a) const;
  std::filesystem::path annotations_dir() const { return root_ / "annotations"; }
  std::filesystem::path manifest_path() const { return root_ / "manifest.json"; }

  // Present codebooks in topic, chunk, item, verb, human order.
  std::vector<codebook::Codebook> codebooks() const;
  std::optional<codebook::Codebook> codebook(codebook::Approach a) const;
  // Machine-approach codebooks only (the annotatable ones).
  std::vector<codebook::Codebook> machine_codebooks() const;

  // Store over the machine codebooks, persisted under annotations/.
  std::unique_ptr<eval::AnnotationStore> open_annotations() const;

 private:
  std::filesystem::path root_;
};

struct FixtureLoadResult {
  std::vector<std::pair<codebook::Approach, std::size_t>> counts;
  bool annotations_loaded = false;
};

// Installs <dir>/<approach>.codebook.json files and, when present,
// <dir>/annotations.json (replacing any previous annotation state).
FixtureLoadResult load_fixtures(const std::filesystem::path& dir, const Workspace& workspace);

}  // namespace incode::app
