#include "incode/corpus/dataset_io.h"

#include "incode/common/digest.h"

namespace incode::corpus {

namespace {
constexpr const char* kFormat = "incode.dataset";
}

json to_json(const Dataset& dataset) {
  json messages = json::array();
  for (const auto& m : dataset.messages()) {
    json markers = json::array();
    for (auto marker : m.media_markers) markers.push_back(std::string(to_string(marker)));
    json obj{{"id", m.id.str()},
             {"speaker_role", std::string(to_string(m.speaker_role))},
             {"timestamp", format_timestamp(m.timestamp)},
             {"content", m.content},
             {"media_markers", markers}};
    if (m.speaker_alias) obj["speaker_alias"] = *m.speaker_alias;
    messages.push_back(std::move(obj));
  }
  json meta{{"research_question", dataset.metadata().research_question},
            {"coding_notes", dataset.metadata().coding_notes},
            {"language_note", dataset.metadata().language_note},
            {"message_count", dataset.size()}};
  if (const auto range = dataset.date_range()) {
    meta["date_range"] = {format_timestamp(range->first).substr(0, 10),
                          format_timestamp(range->second).substr(0, 10)};
  }
  return {{"format", kFormat}, {"version", 1}, {"metadata", meta}, {"messages", messages}};
}

Dataset dataset_from_json(const json& doc) {
  expect_format(doc, kFormat, 1);
  std::vector<Message> messages;
  for (const auto& obj : doc.at("messages")) {
    Message m;
    const auto id = MessageId::parse(obj.at("id").get<std::string>());
    const auto role = parse_speaker_role(obj.at("speaker_role").get<std::string>());
    const auto ts = parse_iso_timestamp(obj.at("timestamp").get<std::string>());
    if (!id || !role || !ts) throw DatasetError("malformed message record: " + obj.dump());
    m.id = *id;
    m.speaker_role = *role;
    m.timestamp = *ts;
    m.content = obj.at("content").get<std::string>();
    if (obj.contains("speaker_alias")) m.speaker_alias = obj["speaker_alias"].get<std::string>();
    m.media_markers = extract_media_markers(m.content);
    messages.push_back(std::move(m));
  }
  const auto& meta = doc.at("metadata");
  DatasetMetadata metadata{meta.value("research_question", ""), meta.value("coding_notes", ""),
                           meta.value("language_note", "")};
  return Dataset(std::move(messages), std::move(metadata));
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  write_json_file(path, to_json(dataset));
}

Dataset load_dataset(const std::filesystem::path& path) {
  return dataset_from_json(read_json_file(path));
}

std::string dataset_digest(const Dataset& dataset) {
  return sha256_hex(to_json(dataset).dump());
}

}  // namespace incode::corpus
