#include "incode/corpus/ingest.h"

#include <algorithm>
#include <charconv>
#include <map>

#include "incode/common/json_io.h"
#include "incode/common/text.h"

namespace incode::corpus {

namespace {

struct RawRecord {
  std::size_t line = 0;
  std::string id;
  std::string speaker;
  std::string time;
  std::string content;
};

// RFC 4180 style: quoted fields may hold separators, doubled quotes and newlines.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv(std::string_view s,
                                                                      char sep) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    const bool blank = row.size() == 1 && row.front().empty() && !field_started;
    if (!blank) rows.emplace_back(row_line, std::move(row));
    row.clear();
    field_started = false;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == sep) {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      end_row();
      ++line;
      row_line = line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw IngestError("unterminated quoted field starting on line " + std::to_string(row_line));
  if (!field.empty() || !row.empty() || field_started) end_row();
  return rows;
}

std::vector<std::pair<std::size_t, std::vector<std::string>>> read_tsv(std::string_view s) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  const auto lines = text::split_lines(s);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    rows.emplace_back(i + 1, text::split(lines[i], '\t'));
  }
  return rows;
}

std::vector<RawRecord> read_delimited(std::string_view s) {
  const auto first_line = s.substr(0, s.find('\n'));
  const bool tabs = first_line.find('\t') != std::string_view::npos;
  auto rows = tabs ? read_tsv(s) : read_csv(s, ',');
  std::vector<RawRecord> records;
  if (rows.empty()) return records;

  std::map<std::string, std::size_t> column;
  const auto& header = rows.front().second;
  for (std::size_t i = 0; i < header.size(); ++i) {
    column.emplace(text::to_lower_ascii(text::trim(header[i])), i);
  }
  for (const char* required : {"id", "speaker", "time", "content"}) {
    if (!column.count(required)) {
      throw IngestError(std::string("header is missing column '") + required + "'");
    }
  }
  std::vector<RecordError> errors;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, fields] = rows[r];
    auto get = [&](const char* name) -> std::optional<std::string> {
      const auto idx = column.at(name);
      if (idx >= fields.size()) return std::nullopt;
      return fields[idx];
    };
    const auto id = get("id");
    const auto speaker = get("speaker");
    const auto time = get("time");
    const auto content = get("content");
    if (!id || !speaker || !time || !content) {
      errors.push_back({line, "expected fields id, speaker, time, content"});
      continue;
    }
    records.push_back({line, *id, *speaker, *time, *content});
  }
  if (!errors.empty()) throw IngestError("malformed records", std::move(errors));
  return records;
}

std::vector<RawRecord> read_json_lines(std::string_view s) {
  std::vector<RawRecord> records;
  std::vector<RecordError> errors;
  const auto lines = text::split_lines(s);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      const auto obj = json::parse(lines[i]);
      RawRecord rec;
      rec.line = i + 1;
      for (auto [key, field] : {std::pair{"id", &rec.id}, std::pair{"speaker", &rec.speaker},
                                std::pair{"time", &rec.time}, std::pair{"content", &rec.content}}) {
        if (!obj.contains(key) || !obj[key].is_string()) {
          throw std::runtime_error(std::string("missing string field '") + key + "'");
        }
        *field = obj[key].get<std::string>();
      }
      records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      errors.push_back({i + 1, e.what()});
    }
  }
  if (!errors.empty()) throw IngestError("malformed records", std::move(errors));
  return records;
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Converts "MM/DD HH:MM" (year implied) or an ISO form. `year` carries the
// rollover state across records.
std::optional<Timestamp> parse_record_time(std::string_view raw, const IngestOptions& options,
                                           int& year, unsigned& last_month, bool& needs_year) {
  const auto s = text::trim(raw);
  if (auto iso = parse_iso_timestamp(s)) return iso;
  if (s.size() != 11 || s[2] != '/' || s[5] != ' ' || s[8] != ':') return std::nullopt;
  const auto mo = to_int(s.substr(0, 2));
  const auto d = to_int(s.substr(3, 2));
  const auto h = to_int(s.substr(6, 2));
  const auto mi = to_int(s.substr(9, 2));
  if (!mo || !d || !h || !mi || *mo < 1 || *mo > 12 || *d < 1 || *h < 0 || *mi < 0) {
    return std::nullopt;
  }
  if (!options.base_year) {
    needs_year = true;
    return std::nullopt;
  }
  const auto month = static_cast<unsigned>(*mo);
  if (last_month != 0 && month < last_month) ++year;
  last_month = month;
  return make_timestamp(year, month, static_cast<unsigned>(*d), static_cast<unsigned>(*h),
                        static_cast<unsigned>(*mi));
}

Message to_message(const RawRecord& rec, Timestamp ts) {
  Message m;
  m.id = *MessageId::parse(text::trim(rec.id));
  const auto speaker = std::string(text::trim(rec.speaker));
  if (const auto role = parse_speaker_role(speaker)) {
    m.speaker_role = *role;
  } else {
    m.speaker_role = SpeakerRole::User;
    m.speaker_alias = speaker;
  }
  m.timestamp = ts;
  m.content = rec.content;
  m.media_markers = extract_media_markers(m.content);
  return m;
}

}  // namespace

IngestResult ingest_text(std::string_view content, const IngestOptions& options) {
  if (!text::is_valid_utf8(content)) throw IngestError("input is not valid UTF-8");
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);

  auto format = options.format;
  if (format == SourceFormat::Auto) {
    const auto head = text::trim(content);
    format = !head.empty() && head.front() == '{' ? SourceFormat::JsonLines : SourceFormat::Delimited;
  }
  const auto records =
      format == SourceFormat::JsonLines ? read_json_lines(content) : read_delimited(content);

  std::vector<RecordError> errors;
  std::vector<Message> messages;
  messages.reserve(records.size());
  int year = options.base_year.value_or(0);
  unsigned last_month = 0;
  for (const auto& rec : records) {
    if (!MessageId::parse(text::trim(rec.id))) {
      errors.push_back({rec.line, "malformed id '" + rec.id + "'"});
      continue;
    }
    if (text::trim(rec.speaker).empty()) {
      errors.push_back({rec.line, "empty speaker"});
      continue;
    }
    bool needs_year = false;
    const auto ts = parse_record_time(rec.time, options, year, last_month, needs_year);
    if (!ts) {
      errors.push_back({rec.line, needs_year ? "timestamp '" + rec.time +
                                                   "' has no year and no base year was given"
                                             : "malformed timestamp '" + rec.time + "'"});
      continue;
    }
    messages.push_back(to_message(rec, *ts));
  }
  if (!errors.empty()) {
    std::string what = "line " + std::to_string(errors.front().line) + ": " + errors.front().message;
    if (errors.size() > 1) what += " (and " + std::to_string(errors.size() - 1) + " more)";
    throw IngestError(what, std::move(errors));
  }

  std::map<MessageId, std::size_t> seen;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const auto [it, fresh] = seen.emplace(messages[i].id, records[i].line);
    if (!fresh) {
      throw IngestError("duplicate id " + messages[i].id.str() + " on lines " +
                        std::to_string(it->second) + " and " + std::to_string(records[i].line));
    }
    if (messages[i].content.empty() && messages[i].media_markers.empty()) {
      throw IngestError("line " + std::to_string(records[i].line) + ": empty content");
    }
    if (i > 0) {
      const auto& a = messages[i - 1];
      const auto& b = messages[i];
      if (b.timestamp < a.timestamp || (b.timestamp == a.timestamp && b.id < a.id)) {
        throw IngestError("out-of-order timestamps: " + a.id.str() + " at " +
                          format_timestamp(a.timestamp) + " precedes " + b.id.str() + " at " +
                          format_timestamp(b.timestamp));
      }
    }
  }

  IngestResult result{Dataset(std::move(messages), options.metadata), {}};
  if (result.dataset.empty()) result.warnings.emplace_back("0 messages");
  return result;
}

IngestResult ingest_dataset(const std::filesystem::path& source, const IngestOptions& options) {
  if (!std::filesystem::exists(source)) throw IngestError("no such file: " + source.string());
  auto opts = options;
  const auto ext = source.extension().string();
  if (opts.format == SourceFormat::Auto && (ext == ".jsonl" || ext == ".ndjson")) {
    opts.format = SourceFormat::JsonLines;
  }
  return ingest_text(read_text_file(source), opts);
}

}  // namespace incode::corpus
