#include "incode/segment/chunk_io.h"

namespace incode::segment {

namespace {

constexpr const char* kFormat = "incode.chunks";

json ids_to_json(const std::vector<MessageId>& ids) {
  json out = json::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

std::vector<MessageId> ids_from_json(const json& j) {
  std::vector<MessageId> out;
  for (const auto& s : j) {
    const auto id = MessageId::parse(s.get<std::string>());
    if (!id) throw IoError("malformed message id in chunk file: " + s.dump());
    out.push_back(*id);
  }
  return out;
}

}  // namespace

json to_json(const SegmentationConfig& config) {
  return {{"method", to_string(config.method)},
          {"min_gap_minutes", config.min_gap.count()},
          {"bandwidth_minutes", config.kernel_bandwidth.count()},
          {"min_chunk_size", config.min_chunk_size}};
}

SegmentationConfig segmentation_config_from_json(const json& j) {
  SegmentationConfig c;
  const auto method = j.value("method", "gap");
  if (method == "gap") {
    c.method = SegmentationMethod::GapThreshold;
  } else if (method == "activity") {
    c.method = SegmentationMethod::SmoothedActivity;
  } else {
    throw ConfigError("unknown segmentation method '" + method + "'");
  }
  c.min_gap = std::chrono::minutes{j.value("min_gap_minutes", 180)};
  c.kernel_bandwidth = std::chrono::minutes{j.value("bandwidth_minutes", 30)};
  c.min_chunk_size = j.value("min_chunk_size", std::size_t{3});
  c.validate();
  return c;
}

json to_json(const ChunkFile& file) {
  json chunks = json::array();
  for (const auto& c : file.chunks) {
    chunks.push_back({{"index", c.index},
                      {"core_ids", ids_to_json(c.core_ids)},
                      {"leading_context_ids", ids_to_json(c.leading_context_ids)},
                      {"trailing_context_ids", ids_to_json(c.trailing_context_ids)}});
  }
  return {{"format", kFormat},
          {"version", 1},
          {"dataset_digest", file.dataset_digest},
          {"config", to_json(file.config)},
          {"context_size", file.context_size},
          {"chunks", chunks}};
}

ChunkFile chunk_file_from_json(const json& doc) {
  expect_format(doc, kFormat, 1);
  ChunkFile file;
  file.dataset_digest = doc.value("dataset_digest", "");
  file.config = segmentation_config_from_json(doc.at("config"));
  file.context_size = doc.value("context_size", std::size_t{3});
  for (const auto& c : doc.at("chunks")) {
    file.chunks.push_back(Chunk{c.at("index").get<std::size_t>(), ids_from_json(c.at("core_ids")),
                                ids_from_json(c.at("leading_context_ids")),
                                ids_from_json(c.at("trailing_context_ids"))});
  }
  return file;
}

void save_chunks(const std::filesystem::path& path, const ChunkFile& file) {
  write_json_file(path, to_json(file));
}

ChunkFile load_chunks(const std::filesystem::path& path) {
  return chunk_file_from_json(read_json_file(path));
}

}  // namespace incode::segment
