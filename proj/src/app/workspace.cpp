#include "incode/app/workspace.h"

#include "incode/codebook/export.h"

namespace incode::app {

namespace {
constexpr codebook::Approach kAll[] = {codebook::Approach::Topic, codebook::Approach::Chunk,
                                       codebook::Approach::Item, codebook::Approach::Verb,
                                       codebook::Approach::Human};
}

Workspace::Workspace(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path Workspace::codebook_path(codebook::Approach a) const {
  return root_ / "codebooks" / (std::string(codebook::to_string(a)) + ".codebook.json");
}

std::filesystem::path Workspace::responses_path(codebook::Approach a) const {
  return root_ / "responses" / (std::string(codebook::to_string(a)) + ".responses.json");
}

std::optional<codebook::Codebook> Workspace::codebook(codebook::Approach a) const {
  const auto path = codebook_path(a);
  if (!std::filesystem::exists(path)) return std::nullopt;
  auto cb = codebook::load_codebook(path);
  if (cb.approach() != a) throw codebook::CodebookError(path.string() + " holds another approach");
  return cb;
}

std::vector<codebook::Codebook> Workspace::codebooks() const {
  std::vector<codebook::Codebook> out;
  for (const auto a : kAll) {
    if (auto cb = codebook(a)) out.push_back(std::move(*cb));
  }
  return out;
}

std::vector<codebook::Codebook> Workspace::machine_codebooks() const {
  auto all = codebooks();
  std::erase_if(all, [](const auto& cb) { return cb.approach() == codebook::Approach::Human; });
  return all;
}

std::unique_ptr<eval::AnnotationStore> Workspace::open_annotations() const {
  return std::make_unique<eval::AnnotationStore>(eval::catalog_of(machine_codebooks()), annotations_dir());
}

FixtureLoadResult load_fixtures(const std::filesystem::path& dir, const Workspace& workspace) {
  if (!std::filesystem::is_directory(dir)) throw IoError("fixture directory not found: " + dir.string());
  FixtureLoadResult result;
  for (const auto a : kAll) {
    const auto path = dir / (std::string(codebook::to_string(a)) + ".codebook.json");
    if (!std::filesystem::exists(path)) continue;
    const auto cb = codebook::load_codebook(path);
    if (cb.approach() != a) throw codebook::CodebookError(path.string() + " holds another approach");
    codebook::save_codebook(workspace.codebook_path(a), cb);
    result.counts.emplace_back(a, cb.size());
  }
  if (result.counts.empty()) throw IoError("no codebook fixtures in " + dir.string());

  std::filesystem::remove_all(workspace.annotations_dir());
  const auto annotations = dir / "annotations.json";
  if (std::filesystem::exists(annotations)) {
    auto store = workspace.open_annotations();
    store->apply(read_json_file(annotations));
    result.annotations_loaded = true;
  }
  return result;
}

}  // namespace incode::app
