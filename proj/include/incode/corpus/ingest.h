#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "incode/common/error.h"
#include "incode/corpus/dataset.h"

namespace incode::corpus {

enum class SourceFormat { Auto, Delimited, JsonLines };

struct IngestOptions {
  // Required when timestamps are written without a year ("11/06 10:04").
  // The year rolls over whenever the month decreases between records.
  std::optional<int> base_year;
  DatasetMetadata metadata;
  SourceFormat format = SourceFormat::Auto;
};

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

class IngestError : public Error {
 public:
  IngestError(const std::string& what, std::vector<RecordError> records = {})
      : Error(what), records_(std::move(records)) {}

  const std::vector<RecordError>& records() const noexcept { return records_; }

 private:
  std::vector<RecordError> records_;
};

struct IngestResult {
  Dataset dataset;
  std::vector<std::string> warnings;
};

IngestResult ingest_text(std::string_view content, const IngestOptions& options);
IngestResult ingest_dataset(const std::filesystem::path& source, const IngestOptions& options);

}  // namespace incode::corpus
