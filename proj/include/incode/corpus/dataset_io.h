#pragma once

#include <filesystem>
#include <string>

#include "incode/common/json_io.h"
#include "incode/corpus/dataset.h"

namespace incode::corpus {

json to_json(const Dataset& dataset);
Dataset dataset_from_json(const json& doc);

void save_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset load_dataset(const std::filesystem::path& path);

// Digest of the canonical structured form.
std::string dataset_digest(const Dataset& dataset);

}  // namespace incode::corpus
