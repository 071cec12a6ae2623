#include "incode/app/pipeline_runs.h"

#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include "incode/codebook/export.h"
#include "incode/coding/chunk_level.h"
#include "incode/coding/item_level.h"
#include "incode/common/digest.h"
#include "incode/corpus/dataset_io.h"
#include "incode/topic/ctfidf.h"
#include "incode/topic/labeling.h"

namespace incode::app {

namespace {

using codebook::Approach;

// Runs fn(i) for i in [0, n) on up to `workers` threads; rethrows the
// failure with the lowest index.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < std::min(std::max<std::size_t>(workers, 1), n); ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

json ids_json(const std::vector<corpus::MessageId>& ids) {
  json out = json::array();
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

std::vector<corpus::MessageId> ids_from_json(const json& j) {
  std::vector<corpus::MessageId> out;
  for (const auto& s : j) {
    const auto id = corpus::MessageId::parse(s.get<std::string>());
    if (!id) throw ParseError("bad message id in responses", s.dump());
    out.push_back(*id);
  }
  return out;
}

json instance_json(const std::string& label, std::size_t ordinal, const std::vector<corpus::MessageId>& refs,
                   const std::optional<std::string>& definition = std::nullopt) {
  json j = {{"label", label}, {"ordinal", ordinal}, {"refs", ids_json(refs)}};
  if (definition) j["definition"] = *definition;
  return j;
}

json approach_config(Approach approach, const RunOptions& options, const RunInputs& inputs) {
  json config = {{"approach", codebook::to_string(approach)}};
  if (approach == Approach::Topic) {
    config["distance_threshold"] = options.topic.cluster.distance_threshold;
    config["oversize_ratio"] = options.topic.cluster.oversize_ratio;
    config["top_k"] = options.topic.top_k;
    config["embedder"] = inputs.embedder.name();
  } else {
    config["segmentation"] = segment::to_json(inputs.chunks.config);
    config["context_size"] = inputs.chunks.context_size;
    if (approach != Approach::Chunk) config["carry"] = options.carry;
  }
  return config;
}

json responses_header(Approach approach, const RunInputs& inputs, const RunOptions& options) {
  const auto digest = corpus::dataset_digest(inputs.dataset);
  const auto config = approach_config(approach, options, inputs);
  return {{"format", "incode.responses"},
          {"version", 1},
          {"approach", codebook::to_string(approach)},
          {"dataset_digest", digest},
          {"backend", inputs.gateway.backend_id()},
          {"seed", options.seed ? json(*options.seed) : json(nullptr)},
          {"config", config},
          {"config_digest", sha256_hex(dump_canonical({{"config", config}, {"dataset", digest}}))},
          {"entries", json::array()}};
}

json run_topic(const RunInputs& inputs, const RunOptions& options) {
  auto doc = responses_header(Approach::Topic, inputs, options);
  const auto embeddings = topic::embed(inputs.dataset.messages(), inputs.embedder);
  auto clusters = topic::ctfidf_keywords(topic::cluster(embeddings, options.topic.cluster), inputs.dataset,
                                         options.topic.top_k);
  std::vector<topic::LabeledTopic> labeled(clusters.size());
  parallel_for(clusters.size(), options.workers, [&](std::size_t i) {
    labeled[i] = topic::label_topic(clusters[i], inputs.dataset, inputs.gateway);
  });
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    const auto& c = labeled[i].cluster;
    json keywords = json::array();
    for (const auto& [term, weight] : c.keywords) keywords.push_back({term, weight});
    doc["entries"].push_back(
        {{"index", i},
         {"members", ids_json(c.members)},
         {"exchange", llm::to_json(labeled[i].exchange)},
         {"parsed", {{"thought", c.thought}, {"label", c.label}, {"keywords", keywords},
                     {"oversize", c.oversize_flag}}},
         {"warnings", c.oversize_flag ? json::array({"oversize cluster: " + std::to_string(c.members.size()) +
                                                     " of " + std::to_string(inputs.dataset.size()) + " messages"})
                                      : json::array()},
         {"instances", json::array({instance_json(c.label, 0, c.members)})}});
  }
  return doc;
}

json run_chunk(const RunInputs& inputs, const RunOptions& options) {
  auto doc = responses_header(Approach::Chunk, inputs, options);
  const auto& chunks = inputs.chunks.chunks;
  std::vector<coding::ChunkLevelResult> results(chunks.size());
  parallel_for(chunks.size(), options.workers, [&](std::size_t i) {
    results[i] = coding::run_chunk_level(chunks[i], inputs.dataset, inputs.gateway);
  });
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    json entries = json::array();
    json instances = json::array();
    auto warnings = results[i].warnings;
    std::size_t ordinal = 0;
    for (const auto& e : results[i].response.entries) {
      entries.push_back({{"label", e.label}, {"definition", e.definition}, {"quotes", e.quotes}});
      std::vector<corpus::MessageId> refs;
      for (const auto& q : e.quotes) {
        const auto found = coding::resolve_quote(q, chunks[i], inputs.dataset);
        if (found.empty()) warnings.push_back("unmatched quote for '" + e.label + "': " + q);
        refs.insert(refs.end(), found.begin(), found.end());
      }
      instances.push_back(instance_json(e.label, ordinal++, refs,
                                        e.definition.empty() ? std::nullopt : std::optional(e.definition)));
    }
    doc["entries"].push_back({{"index", chunks[i].index},
                              {"core_ids", ids_json(chunks[i].core_ids)},
                              {"exchange", llm::to_json(results[i].exchange)},
                              {"parsed", {{"entries", entries}}},
                              {"warnings", warnings},
                              {"instances", instances}});
  }
  return doc;
}

json run_item(const RunInputs& inputs, const RunOptions& options, bool verb) {
  auto doc = responses_header(verb ? Approach::Verb : Approach::Item, inputs, options);
  coding::CarryState carry;
  for (const auto& chunk : inputs.chunks.chunks) {
    const auto result = coding::run_item_level(chunk, inputs.dataset, inputs.gateway,
                                               options.carry ? carry : coding::CarryState{}, verb);
    carry = result.carry;
    json tags = json::array();
    for (const auto& t : result.response.tags_per_message) tags.push_back(t);
    json instances = json::array();
    std::size_t ordinal = 0;
    for (const auto& [id, message_tags] : result.core_tags()) {
      for (const auto& tag : message_tags) instances.push_back(instance_json(tag, ordinal++, {id}));
    }
    json presented = json::array();
    for (const auto& p : result.presented) presented.push_back({{"id", p.id.str()}, {"context", p.context}});
    doc["entries"].push_back({{"index", chunk.index},
                              {"core_ids", ids_json(chunk.core_ids)},
                              {"presented", presented},
                              {"exchange", llm::to_json(result.exchange)},
                              {"parsed",
                               {{"thoughts", result.response.thoughts},
                                {"tags", tags},
                                {"summary", result.response.summary},
                                {"notes", result.response.notes}}},
                              {"warnings", json::array()},
                              {"instances", instances}});
  }
  return doc;
}

}  // namespace

json run_approach(Approach approach, const RunInputs& inputs, const RunOptions& options) {
  switch (approach) {
    case Approach::Topic: return run_topic(inputs, options);
    case Approach::Chunk: return run_chunk(inputs, options);
    case Approach::Item: return run_item(inputs, options, false);
    case Approach::Verb: return run_item(inputs, options, true);
    case Approach::Human: break;
  }
  throw ConfigError("the human codebook is not produced by a pipeline");
}

std::vector<codebook::RawCodeInstance> instances_from_responses(const json& responses) {
  expect_format(responses, "incode.responses", 1);
  std::vector<codebook::RawCodeInstance> out;
  for (const auto& entry : responses.at("entries")) {
    for (const auto& inst : entry.at("instances")) {
      codebook::RawCodeInstance r;
      r.raw_label = inst.at("label").get<std::string>();
      r.chunk_index = entry.at("index").get<std::size_t>();
      r.ordinal = inst.at("ordinal").get<std::size_t>();
      r.message_refs = ids_from_json(inst.at("refs"));
      if (inst.contains("definition")) r.definition = inst.at("definition").get<std::string>();
      out.push_back(std::move(r));
    }
  }
  return out;
}

codebook::Codebook aggregate(const json& responses, const corpus::Dataset& dataset,
                             std::vector<std::string>* warnings) {
  const auto approach = codebook::parse_approach(responses.at("approach").get<std::string>());
  if (!approach) throw ParseError("unknown approach in responses", responses.at("approach").dump());
  if (responses.at("dataset_digest").get<std::string>() != corpus::dataset_digest(dataset)) {
    throw ConfigError("responses were produced from a different dataset");
  }
  codebook::RunMetadata meta;
  meta.backend = responses.at("backend").get<std::string>();
  if (!responses.at("seed").is_null()) meta.seed = responses.at("seed").get<std::uint64_t>();
  meta.config_digest = responses.at("config_digest").get<std::string>();
  return codebook::merge(instances_from_responses(responses), *approach, dataset, meta, warnings);
}

json to_json(const RunManifest& m) {
  json artifacts = json::array();
  for (const auto& a : m.artifacts) artifacts.push_back({{"path", a.path}, {"sha256", a.sha256}});
  return {{"format", "incode.manifest"},
          {"version", 1},
          {"dataset_digest", m.dataset_digest},
          {"segmentation", m.segmentation},
          {"approaches", m.approaches},
          {"backend", m.backend},
          {"seed", m.seed ? json(*m.seed) : json(nullptr)},
          {"artifacts", artifacts},
          {"created_at", m.created_at}};
}

RunManifest manifest_from_json(const json& doc) {
  expect_format(doc, "incode.manifest", 1);
  RunManifest m;
  m.dataset_digest = doc.at("dataset_digest").get<std::string>();
  m.segmentation = doc.at("segmentation");
  m.approaches = doc.at("approaches");
  m.backend = doc.at("backend").get<std::string>();
  if (!doc.at("seed").is_null()) m.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& a : doc.at("artifacts")) m.artifacts.push_back({a.at("path"), a.at("sha256")});
  m.created_at = doc.at("created_at").get<std::string>();
  return m;
}

std::vector<std::string> verify_manifest(const Workspace& workspace) {
  const auto manifest = manifest_from_json(read_json_file(workspace.manifest_path()));
  std::vector<std::string> problems;
  for (const auto& a : manifest.artifacts) {
    const auto path = workspace.root() / a.path;
    if (!std::filesystem::exists(path)) {
      problems.push_back(a.path + ": missing");
    } else if (sha256_hex(read_text_file(path)) != a.sha256) {
      problems.push_back(a.path + ": digest mismatch");
    }
  }
  return problems;
}

RunManifest run_pipelines(const Workspace& workspace, const std::vector<Approach>& approaches,
                          const RunInputs& inputs, const RunOptions& options) {
  RunManifest manifest;
  manifest.dataset_digest = corpus::dataset_digest(inputs.dataset);
  manifest.segmentation = segment::to_json(inputs.chunks.config);
  manifest.approaches = json::object();
  manifest.backend = inputs.gateway.backend_id();
  manifest.seed = options.seed;

  const auto record = [&](const std::filesystem::path& path) {
    manifest.artifacts.push_back({std::filesystem::relative(path, workspace.root()).generic_string(),
                                  sha256_hex(read_text_file(path))});
  };
  for (const auto approach : approaches) {
    const auto responses = run_approach(approach, inputs, options);
    manifest.approaches[std::string(codebook::to_string(approach))] = responses.at("config");
    write_json_file(workspace.responses_path(approach), responses);
    record(workspace.responses_path(approach));
    codebook::save_codebook(workspace.codebook_path(approach), aggregate(responses, inputs.dataset));
    record(workspace.codebook_path(approach));
  }
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const auto days = std::chrono::floor<std::chrono::days>(now);
  const std::chrono::year_month_day ymd(days);
  const std::chrono::hh_mm_ss hms(now - days);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  manifest.created_at = buf;
  write_json_file(workspace.manifest_path(), to_json(manifest));
  return manifest;
}

}  // namespace incode::app
