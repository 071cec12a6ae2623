#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "incode/codebook/codebook.h"
#include "incode/common/error.h"
#include "incode/common/json_io.h"

namespace incode::eval {

using codebook::Approach;

enum class Flag { GroundednessIssue, OverlyBroad };
using FlagSet = std::set<Flag>;

std::string_view to_string(Flag f);  // "groundedness_issue" | "overly_broad"
std::optional<Flag> parse_flag(std::string_view s);
json flags_to_json(const FlagSet& flags);
FlagSet flags_from_json(const json& j);

struct Annotation {
  std::string rater;
  Approach approach = Approach::Topic;
  std::string label;  // normalized
  FlagSet flags;
  std::string note;

  bool operator==(const Annotation&) const = default;
};

struct Reconciliation {
  Approach approach = Approach::Topic;
  std::string label;
  std::map<std::string, FlagSet> rater_flags;
  FlagSet final_flags;
  std::string note;

  bool operator==(const Reconciliation&) const = default;
};

struct Disagreement {
  std::string label;
  std::map<std::string, FlagSet> rater_flags;
  std::map<std::string, std::string> rater_notes;
  bool resolved = false;
};

class EvaluationError : public Error {
 public:
  enum class Kind {
    InvalidInput,
    UnknownRater,
    Unauthorized,
    UnknownCode,
    RaterLimit,
    DuplicateRater,
    Locked,
    NotCompleted,
    NoDisagreement,
    AlreadyReconciled,
    NotFinalizable,
  };

  EvaluationError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }
  std::string_view reason() const;

 private:
  Kind kind_;
};

// Codes that may be annotated, per approach (normalized labels).
using CodeCatalog = std::map<Approach, std::set<std::string>>;
CodeCatalog catalog_of(const std::vector<codebook::Codebook>& codebooks);

// Two-rater flag store. Writes are serialized, reads run concurrently.
// With a directory, every mutation is appended to events.jsonl and the
// snapshot in annotations.json is rewritten; opening replays any logged
// events newer than the snapshot.
class AnnotationStore {
 public:
  static constexpr std::size_t kMaxRaters = 2;

  explicit AnnotationStore(CodeCatalog catalog);
  AnnotationStore(CodeCatalog catalog, std::filesystem::path directory);

  // Issues a token unless one is supplied.
  std::string register_rater(const std::string& name, std::optional<std::string> token = std::nullopt);
  std::vector<std::string> raters() const;
  bool authenticate(const std::string& name, const std::string& token) const;

  // Upsert by (rater, approach, label); an empty flag set without a note
  // removes the entry. Re-submitting an identical annotation is a no-op.
  void record(Annotation annotation);
  void complete(const std::string& rater, Approach approach);
  bool completed(const std::string& rater, Approach approach) const;

  std::vector<Annotation> annotations(const std::string& rater) const;
  std::vector<Annotation> annotations(const std::string& rater, Approach approach) const;

  // Codes whose two flag sets differ, in label order.
  std::vector<Disagreement> disagreements(Approach approach) const;
  std::vector<std::string> unresolved(Approach approach) const;

  void reconcile(Approach approach, const std::string& label, FlagSet final_flags, std::string note);
  std::vector<Reconciliation> reconciliations(Approach approach) const;

  // Final flags when decided: reconciled, or both raters agree after
  // completing. nullopt while still open.
  std::optional<FlagSet> final_flags(Approach approach, const std::string& label) const;
  // Two raters registered, both completed, nothing unresolved.
  bool finalizable(Approach approach) const;

  const CodeCatalog& catalog() const noexcept { return catalog_; }
  std::uint64_t sequence() const;

  json snapshot() const;
  // Applies a snapshot document through the regular operations, so every
  // precondition is checked.
  void apply(const json& doc);

 private:
  struct RaterState {
    std::string token;
    std::map<std::pair<Approach, std::string>, Annotation> annotations;
    std::set<Approach> completed;
  };

  std::string normalized_code(Approach approach, const std::string& label) const;
  FlagSet flags_of(const RaterState& r, Approach a, const std::string& label) const;
  bool all_completed(Approach approach) const;
  std::optional<FlagSet> final_flags_locked(Approach approach, const std::string& label) const;
  std::vector<std::string> unresolved_locked(Approach approach) const;
  json snapshot_locked() const;
  void persist(const json& event);
  void replay(const json& event);

  CodeCatalog catalog_;
  std::optional<std::filesystem::path> directory_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, RaterState> raters_;
  std::vector<std::string> rater_order_;
  std::map<std::pair<Approach, std::string>, Reconciliation> reconciliations_;
  std::uint64_t sequence_ = 0;
  bool replaying_ = false;
};

}  // namespace incode::eval
