#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "incode/app/workspace.h"
#include "incode/codebook/codebook.h"
#include "incode/codebook/merge.h"
#include "incode/common/json_io.h"
#include "incode/corpus/dataset.h"
#include "incode/llm/gateway.h"
#include "incode/segment/chunk_io.h"
#include "incode/topic/clustering.h"
#include "incode/topic/embedding.h"

namespace incode::app {

struct TopicRunOptions {
  topic::ClusterOptions cluster;
  std::size_t top_k = 10;
};

struct RunOptions {
  TopicRunOptions topic;
  bool carry = true;        // item-level summary/notes passed to the next chunk
  std::size_t workers = 4;  // fan-out for topic labels and chunk-level calls
  std::optional<std::uint64_t> seed;
};

// Inputs shared by every approach. The embedder is only used by topic runs.
struct RunInputs {
  const corpus::Dataset& dataset;
  const segment::ChunkFile& chunks;
  llm::Gateway& gateway;
  topic::Embedder& embedder;
};

// A responses document keeps, per chunk (or per cluster for topic runs),
// the raw exchange, the parsed form, parser warnings and the code
// instances derived from it.
json run_approach(codebook::Approach approach, const RunInputs& inputs, const RunOptions& options);

std::vector<codebook::RawCodeInstance> instances_from_responses(const json& responses);
codebook::Codebook aggregate(const json& responses, const corpus::Dataset& dataset,
                             std::vector<std::string>* warnings = nullptr);

struct ArtifactRecord {
  std::string path;  // relative to the workspace root
  std::string sha256;
};

struct RunManifest {
  std::string dataset_digest;
  json segmentation;
  json approaches;  // approach id -> config
  std::string backend;
  std::optional<std::uint64_t> seed;
  std::vector<ArtifactRecord> artifacts;
  std::string created_at;
};

json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const json& doc);
// Problems found when re-hashing every artifact; empty when all verify.
std::vector<std::string> verify_manifest(const Workspace& workspace);

// Runs the approaches in order, writing responses/ and codebooks/ plus the
// manifest. Codebook files depend only on inputs, backend and seed.
RunManifest run_pipelines(const Workspace& workspace, const std::vector<codebook::Approach>& approaches,
                          const RunInputs& inputs, const RunOptions& options);

}  // namespace incode::app
