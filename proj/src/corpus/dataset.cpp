#include "incode/corpus/dataset.h"

#include <array>
#include <charconv>
#include <cstdio>

namespace incode::corpus {

namespace {

constexpr std::array<std::pair<std::string_view, MediaMarker>, 3> kMarkers{{
    {"[Image]", MediaMarker::Image},
    {"[Emoji]", MediaMarker::Emoji},
    {"[Figure]", MediaMarker::Figure},
}};

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
  return value;
}

}  // namespace

std::string_view to_string(SpeakerRole role) {
  return role == SpeakerRole::Designer ? "Designer" : "User";
}

std::optional<SpeakerRole> parse_speaker_role(std::string_view s) {
  if (s == "Designer") return SpeakerRole::Designer;
  if (s == "User") return SpeakerRole::User;
  return std::nullopt;
}

std::string_view to_string(MediaMarker marker) {
  switch (marker) {
    case MediaMarker::Image: return "Image";
    case MediaMarker::Emoji: return "Emoji";
    case MediaMarker::Figure: return "Figure";
  }
  return "Image";
}

std::optional<MediaMarker> parse_media_marker(std::string_view s) {
  for (const auto& [token, marker] : kMarkers) {
    if (token.substr(1, token.size() - 2) == s) return marker;
  }
  return std::nullopt;
}

std::optional<Timestamp> make_timestamp(int year, unsigned month, unsigned day, unsigned hour,
                                        unsigned minute) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day}};
  if (!ymd.ok() || hour > 23 || minute > 59) return std::nullopt;
  return Timestamp{sys_days{ymd} + hours{hour} + minutes{minute}};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const auto tod = t - day;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.count() / 60), static_cast<int>(tod.count() % 60));
  return buf;
}

std::optional<Timestamp> parse_iso_timestamp(std::string_view s) {
  // YYYY-MM-DD[T ]HH:MM[:SS]
  if (s.size() != 16 && s.size() != 19) return std::nullopt;
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':') {
    return std::nullopt;
  }
  if (s.size() == 19 && s[16] != ':') return std::nullopt;
  const auto y = parse_int(s.substr(0, 4));
  const auto mo = parse_int(s.substr(5, 2));
  const auto d = parse_int(s.substr(8, 2));
  const auto h = parse_int(s.substr(11, 2));
  const auto mi = parse_int(s.substr(14, 2));
  if (!y || !mo || !d || !h || !mi || *mo < 0 || *d < 0 || *h < 0 || *mi < 0) return std::nullopt;
  if (s.size() == 19) {
    const auto sec = parse_int(s.substr(17, 2));
    if (!sec || *sec < 0 || *sec > 59) return std::nullopt;
  }
  return make_timestamp(*y, static_cast<unsigned>(*mo), static_cast<unsigned>(*d),
                        static_cast<unsigned>(*h), static_cast<unsigned>(*mi));
}

std::string MessageId::str() const {
  return std::to_string(session) + "-" + std::to_string(index);
}

std::optional<MessageId> MessageId::parse(std::string_view s) {
  const auto dash = s.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  const auto session = parse_int(s.substr(0, dash));
  const auto index = parse_int(s.substr(dash + 1));
  if (!session || !index || *session < 0 || *index < 0) return std::nullopt;
  return MessageId{*session, *index};
}

std::vector<MediaMarker> extract_media_markers(std::string_view content) {
  std::vector<MediaMarker> out;
  for (std::size_t i = 0; i < content.size(); ++i) {
    if (content[i] != '[') continue;
    for (const auto& [token, marker] : kMarkers) {
      if (content.substr(i, token.size()) == token) {
        out.push_back(marker);
        i += token.size() - 1;
        break;
      }
    }
  }
  return out;
}

std::string Message::render() const {
  return id.str() + ": " + std::string(to_string(speaker_role)) + ": " + content;
}

Dataset::Dataset(std::vector<Message> messages, DatasetMetadata metadata)
    : messages_(std::move(messages)), metadata_(std::move(metadata)) {
  for (std::size_t i = 0; i < messages_.size(); ++i) {
    const auto& m = messages_[i];
    if (!positions_.emplace(m.id, i).second) {
      throw DatasetError("duplicate message id " + m.id.str());
    }
    if (m.content.empty() && m.media_markers.empty()) {
      throw DatasetError("message " + m.id.str() + " has neither content nor media");
    }
    if (i > 0) {
      const auto& prev = messages_[i - 1];
      if (m.timestamp < prev.timestamp ||
          (m.timestamp == prev.timestamp && m.id < prev.id)) {
        throw DatasetError("messages out of order: " + prev.id.str() + " (" +
                           format_timestamp(prev.timestamp) + ") precedes " + m.id.str() + " (" +
                           format_timestamp(m.timestamp) + ")");
      }
    }
  }
}

std::optional<std::pair<std::chrono::sys_days, std::chrono::sys_days>> Dataset::date_range() const {
  if (messages_.empty()) return std::nullopt;
  using std::chrono::floor;
  return std::pair{floor<std::chrono::days>(messages_.front().timestamp),
                   floor<std::chrono::days>(messages_.back().timestamp)};
}

std::optional<std::size_t> Dataset::position(const MessageId& id) const {
  const auto it = positions_.find(id);
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

const Message& Dataset::at(const MessageId& id) const {
  const auto it = positions_.find(id);
  if (it == positions_.end()) throw DatasetError("unknown message id " + id.str());
  return messages_[it->second];
}

void Dataset::require_research_question() const {
  if (metadata_.research_question.empty()) {
    throw ConfigError("dataset has no research question; supply one in the metadata (ingest --meta)");
  }
}

}  // namespace incode::corpus
