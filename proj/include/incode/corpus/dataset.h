#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "incode/common/error.h"

namespace incode::corpus {

enum class SpeakerRole { Designer, User };
enum class MediaMarker { Image, Emoji, Figure };

using Timestamp = std::chrono::sys_time<std::chrono::minutes>;

std::string_view to_string(SpeakerRole role);
std::optional<SpeakerRole> parse_speaker_role(std::string_view s);
std::string_view to_string(MediaMarker marker);
std::optional<MediaMarker> parse_media_marker(std::string_view s);

// Returns nullopt for an invalid calendar date or time of day.
std::optional<Timestamp> make_timestamp(int year, unsigned month, unsigned day, unsigned hour,
                                        unsigned minute);
// "YYYY-MM-DDTHH:MM"
std::string format_timestamp(Timestamp t);
std::optional<Timestamp> parse_iso_timestamp(std::string_view s);

// "<session>-<index>", e.g. "2-55". Ordered by (session, index).
struct MessageId {
  int session = 0;
  int index = 0;

  auto operator<=>(const MessageId&) const = default;

  std::string str() const;
  static std::optional<MessageId> parse(std::string_view s);
};

// Exact bracketed placeholders only: "[Image]", "[Emoji]", "[Figure]", repeatable.
std::vector<MediaMarker> extract_media_markers(std::string_view content);

struct Message {
  MessageId id;
  SpeakerRole speaker_role = SpeakerRole::User;
  std::optional<std::string> speaker_alias;
  Timestamp timestamp{};
  std::string content;
  std::vector<MediaMarker> media_markers;

  // "2-3: Designer: I'll upload one now... Are you a teacher?"
  std::string render() const;

  bool operator==(const Message&) const = default;
};

struct DatasetMetadata {
  std::string research_question;
  std::string coding_notes;
  std::string language_note;

  bool operator==(const DatasetMetadata&) const = default;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

// Ordered conversation corpus. Immutable once constructed; the constructor
// enforces unique ids, (timestamp, index) ordering and non-empty content.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Message> messages, DatasetMetadata metadata);

  const std::vector<Message>& messages() const noexcept { return messages_; }
  const DatasetMetadata& metadata() const noexcept { return metadata_; }
  std::size_t size() const noexcept { return messages_.size(); }
  bool empty() const noexcept { return messages_.empty(); }

  std::optional<std::pair<std::chrono::sys_days, std::chrono::sys_days>> date_range() const;

  bool contains(const MessageId& id) const { return positions_.count(id) != 0; }
  std::optional<std::size_t> position(const MessageId& id) const;
  const Message& at(const MessageId& id) const;

  // Throws ConfigError when there is no research question to bind.
  void require_research_question() const;

  bool operator==(const Dataset& other) const {
    return messages_ == other.messages_ && metadata_ == other.metadata_;
  }

 private:
  std::vector<Message> messages_;
  DatasetMetadata metadata_;
  std::map<MessageId, std::size_t> positions_;
};

}  // namespace incode::corpus
