#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "incode/common/json_io.h"
#include "incode/segment/segmenter.h"

namespace incode::segment {

struct ChunkFile {
  std::string dataset_digest;
  SegmentationConfig config;
  std::size_t context_size = 3;
  std::vector<Chunk> chunks;
};

json to_json(const SegmentationConfig& config);
SegmentationConfig segmentation_config_from_json(const json& j);

json to_json(const ChunkFile& file);
ChunkFile chunk_file_from_json(const json& doc);

void save_chunks(const std::filesystem::path& path, const ChunkFile& file);
ChunkFile load_chunks(const std::filesystem::path& path);

}  // namespace incode::segment
