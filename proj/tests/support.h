#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "incode/corpus/dataset.h"
#include "incode/corpus/ingest.h"

namespace incode::testing {

inline std::filesystem::path source_dir() { return INCODE_SOURCE_DIR; }
inline std::filesystem::path fixture_dir() { return source_dir() / "fixtures" / "study"; }

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("incode-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline corpus::DatasetMetadata study_metadata() {
  return {"How did Physics Lab's online community emerge?", "", ""};
}

// The bundled 127-message study dataset.
inline corpus::Dataset study_dataset() {
  corpus::IngestOptions options;
  options.base_year = 2017;
  options.metadata = study_metadata();
  return corpus::ingest_dataset(source_dir() / "data" / "physics_lab.tsv", options).dataset;
}

// The 36-message excerpt 2-55 .. 2-90.
inline corpus::Dataset sample_dataset() {
  corpus::IngestOptions options;
  options.base_year = 2017;
  options.metadata = study_metadata();
  return corpus::ingest_dataset(source_dir() / "data" / "sample_chunk.tsv", options).dataset;
}

// Messages "1-i" at the given minute offsets from 2020-01-01 00:00.
inline corpus::Dataset dataset_at_minutes(const std::vector<int>& minutes) {
  std::vector<corpus::Message> messages;
  const auto base = *corpus::make_timestamp(2020, 1, 1, 0, 0);
  for (std::size_t i = 0; i < minutes.size(); ++i) {
    corpus::Message m;
    m.id = {1, static_cast<int>(i)};
    m.speaker_role = i % 2 ? corpus::SpeakerRole::User : corpus::SpeakerRole::Designer;
    m.timestamp = base + std::chrono::minutes(minutes[i]);
    m.content = "message " + std::to_string(i);
    messages.push_back(std::move(m));
  }
  return corpus::Dataset(std::move(messages), study_metadata());
}

}  // namespace incode::testing
