#include "incode/eval/annotation_store.h"

#include <fstream>
#include <mutex>
#include <random>

#include "incode/common/text.h"

namespace incode::eval {

namespace {

using Kind = EvaluationError::Kind;

std::string fresh_token() {
  std::random_device rd;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  for (int i = 0; i < 32; ++i) s.push_back(kHex[rd() & 0xF]);
  return s;
}

Approach approach_from_json(const json& j) {
  const auto a = codebook::parse_approach(j.get<std::string>());
  if (!a) throw EvaluationError(Kind::InvalidInput, "unknown approach " + j.dump());
  return *a;
}

}  // namespace

std::string_view to_string(Flag f) {
  return f == Flag::GroundednessIssue ? "groundedness_issue" : "overly_broad";
}

std::optional<Flag> parse_flag(std::string_view s) {
  if (s == "groundedness_issue") return Flag::GroundednessIssue;
  if (s == "overly_broad") return Flag::OverlyBroad;
  return std::nullopt;
}

json flags_to_json(const FlagSet& flags) {
  json out = json::array();
  for (const auto f : flags) out.push_back(to_string(f));
  return out;
}

FlagSet flags_from_json(const json& j) {
  if (!j.is_array()) throw EvaluationError(Kind::InvalidInput, "flags must be an array");
  FlagSet out;
  for (const auto& item : j) {
    const auto f = item.is_string() ? parse_flag(item.get<std::string>()) : std::nullopt;
    if (!f) throw EvaluationError(Kind::InvalidInput, "unknown flag " + item.dump());
    out.insert(*f);
  }
  return out;
}

std::string_view EvaluationError::reason() const {
  switch (kind_) {
    case Kind::InvalidInput: return "invalid_input";
    case Kind::UnknownRater: return "unknown_rater";
    case Kind::Unauthorized: return "unauthorized";
    case Kind::UnknownCode: return "unknown_code";
    case Kind::RaterLimit: return "rater_limit";
    case Kind::DuplicateRater: return "duplicate_rater";
    case Kind::Locked: return "locked";
    case Kind::NotCompleted: return "not_completed";
    case Kind::NoDisagreement: return "no_disagreement";
    case Kind::AlreadyReconciled: return "already_reconciled";
    case Kind::NotFinalizable: return "not_finalizable";
  }
  return "error";
}

CodeCatalog catalog_of(const std::vector<codebook::Codebook>& codebooks) {
  CodeCatalog out;
  for (const auto& cb : codebooks) {
    auto& labels = out[cb.approach()];
    for (const auto& code : cb.codes()) labels.insert(code.normalized_label);
  }
  return out;
}

AnnotationStore::AnnotationStore(CodeCatalog catalog) : catalog_(std::move(catalog)) {}

AnnotationStore::AnnotationStore(CodeCatalog catalog, std::filesystem::path directory)
    : catalog_(std::move(catalog)) {
  std::filesystem::create_directories(directory);
  const auto snapshot_path = directory / "annotations.json";
  const auto log_path = directory / "events.jsonl";
  replaying_ = true;
  std::uint64_t base = 0;
  if (std::filesystem::exists(snapshot_path)) {
    const auto doc = read_json_file(snapshot_path);
    apply(doc);
    base = doc.value("sequence", std::uint64_t{0});
  }
  sequence_ = base;
  if (std::filesystem::exists(log_path)) {
    for (const auto& line : text::split_lines(read_text_file(log_path))) {
      if (text::trim(line).empty()) continue;
      const auto event = json::parse(line);
      if (event.at("seq").get<std::uint64_t>() <= base) continue;
      replay(event);
      sequence_ = event.at("seq").get<std::uint64_t>();
    }
  }
  replaying_ = false;
  directory_ = std::move(directory);
}

std::string AnnotationStore::normalized_code(Approach approach, const std::string& label) const {
  std::string key;
  try {
    key = codebook::normalize_label(label);
  } catch (const Error&) {
    throw EvaluationError(Kind::InvalidInput, "empty code label");
  }
  const auto it = catalog_.find(approach);
  if (it == catalog_.end() || it->second.count(key) == 0) {
    throw EvaluationError(Kind::UnknownCode, "unknown code '" + label + "' in approach " +
                                                 std::string(codebook::to_string(approach)));
  }
  return key;
}

FlagSet AnnotationStore::flags_of(const RaterState& r, Approach a, const std::string& label) const {
  const auto it = r.annotations.find({a, label});
  return it == r.annotations.end() ? FlagSet{} : it->second.flags;
}

bool AnnotationStore::all_completed(Approach approach) const {
  if (rater_order_.size() < kMaxRaters) return false;
  for (const auto& name : rater_order_) {
    if (raters_.at(name).completed.count(approach) == 0) return false;
  }
  return true;
}

void AnnotationStore::persist(const json& event) {
  ++sequence_;
  if (replaying_ || !directory_) return;
  auto e = event;
  e["seq"] = sequence_;
  std::ofstream log(*directory_ / "events.jsonl", std::ios::app);
  if (!log) throw IoError("cannot append to " + (*directory_ / "events.jsonl").string());
  log << e.dump() << '\n';
  log.flush();
  write_json_file(*directory_ / "annotations.json", snapshot_locked());
}

std::string AnnotationStore::register_rater(const std::string& name, std::optional<std::string> token) {
  std::unique_lock lock(mutex_);
  if (text::trim(name).empty()) throw EvaluationError(Kind::InvalidInput, "rater name is empty");
  if (raters_.count(name)) throw EvaluationError(Kind::DuplicateRater, "rater '" + name + "' already exists");
  if (raters_.size() >= kMaxRaters) {
    throw EvaluationError(Kind::RaterLimit, "at most " + std::to_string(kMaxRaters) + " raters");
  }
  const auto t = token ? *token : fresh_token();
  raters_[name].token = t;
  rater_order_.push_back(name);
  persist({{"op", "register"}, {"rater", name}, {"token", t}});
  return t;
}

std::vector<std::string> AnnotationStore::raters() const {
  std::shared_lock lock(mutex_);
  return rater_order_;
}

bool AnnotationStore::authenticate(const std::string& name, const std::string& token) const {
  std::shared_lock lock(mutex_);
  const auto it = raters_.find(name);
  return it != raters_.end() && it->second.token == token;
}

void AnnotationStore::record(Annotation annotation) {
  std::unique_lock lock(mutex_);
  const auto it = raters_.find(annotation.rater);
  if (it == raters_.end()) throw EvaluationError(Kind::UnknownRater, "unknown rater '" + annotation.rater + "'");
  annotation.label = normalized_code(annotation.approach, annotation.label);
  auto& state = it->second;
  if (state.completed.count(annotation.approach)) {
    throw EvaluationError(Kind::Locked, "rater '" + annotation.rater + "' completed " +
                                            std::string(codebook::to_string(annotation.approach)));
  }
  const std::pair key{annotation.approach, annotation.label};
  const auto existing = state.annotations.find(key);
  const bool clear = annotation.flags.empty() && annotation.note.empty();
  if (clear ? existing == state.annotations.end()
            : existing != state.annotations.end() && existing->second == annotation) {
    return;
  }
  json event = {{"op", "annotate"},
                {"rater", annotation.rater},
                {"approach", codebook::to_string(annotation.approach)},
                {"label", annotation.label},
                {"flags", flags_to_json(annotation.flags)},
                {"note", annotation.note}};
  if (clear) {
    state.annotations.erase(existing);
  } else {
    state.annotations[key] = std::move(annotation);
  }
  persist(event);
}

void AnnotationStore::complete(const std::string& rater, Approach approach) {
  std::unique_lock lock(mutex_);
  const auto it = raters_.find(rater);
  if (it == raters_.end()) throw EvaluationError(Kind::UnknownRater, "unknown rater '" + rater + "'");
  if (!it->second.completed.insert(approach).second) return;
  persist({{"op", "complete"}, {"rater", rater}, {"approach", codebook::to_string(approach)}});
}

bool AnnotationStore::completed(const std::string& rater, Approach approach) const {
  std::shared_lock lock(mutex_);
  const auto it = raters_.find(rater);
  return it != raters_.end() && it->second.completed.count(approach) != 0;
}

std::vector<Annotation> AnnotationStore::annotations(const std::string& rater) const {
  std::shared_lock lock(mutex_);
  const auto it = raters_.find(rater);
  if (it == raters_.end()) throw EvaluationError(Kind::UnknownRater, "unknown rater '" + rater + "'");
  std::vector<Annotation> out;
  for (const auto& [key, a] : it->second.annotations) out.push_back(a);
  return out;
}

std::vector<Annotation> AnnotationStore::annotations(const std::string& rater, Approach approach) const {
  auto all = annotations(rater);
  std::erase_if(all, [&](const Annotation& a) { return a.approach != approach; });
  return all;
}

std::vector<Disagreement> AnnotationStore::disagreements(Approach approach) const {
  std::shared_lock lock(mutex_);
  std::vector<Disagreement> out;
  if (rater_order_.size() < kMaxRaters) return out;
  const auto it = catalog_.find(approach);
  if (it == catalog_.end()) return out;
  for (const auto& label : it->second) {
    Disagreement d;
    d.label = label;
    for (const auto& name : rater_order_) {
      const auto& r = raters_.at(name);
      d.rater_flags[name] = flags_of(r, approach, label);
      const auto a = r.annotations.find({approach, label});
      d.rater_notes[name] = a == r.annotations.end() ? "" : a->second.note;
    }
    if (d.rater_flags.at(rater_order_[0]) == d.rater_flags.at(rater_order_[1])) continue;
    d.resolved = reconciliations_.count({approach, label}) != 0;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<std::string> AnnotationStore::unresolved_locked(Approach approach) const {
  std::vector<std::string> out;
  if (rater_order_.size() < kMaxRaters) return out;
  const auto it = catalog_.find(approach);
  if (it == catalog_.end()) return out;
  const auto& a = raters_.at(rater_order_[0]);
  const auto& b = raters_.at(rater_order_[1]);
  for (const auto& label : it->second) {
    if (flags_of(a, approach, label) != flags_of(b, approach, label) &&
        reconciliations_.count({approach, label}) == 0) {
      out.push_back(label);
    }
  }
  return out;
}

std::vector<std::string> AnnotationStore::unresolved(Approach approach) const {
  std::shared_lock lock(mutex_);
  return unresolved_locked(approach);
}

void AnnotationStore::reconcile(Approach approach, const std::string& label, FlagSet final_flags,
                                std::string note) {
  std::unique_lock lock(mutex_);
  const auto key = normalized_code(approach, label);
  if (!all_completed(approach)) {
    throw EvaluationError(Kind::NotCompleted, "both raters must complete " +
                                                  std::string(codebook::to_string(approach)) +
                                                  " before reconciling");
  }
  if (reconciliations_.count({approach, key})) {
    throw EvaluationError(Kind::AlreadyReconciled, "'" + key + "' is already reconciled");
  }
  Reconciliation r;
  r.approach = approach;
  r.label = key;
  for (const auto& name : rater_order_) r.rater_flags[name] = flags_of(raters_.at(name), approach, key);
  if (r.rater_flags.at(rater_order_[0]) == r.rater_flags.at(rater_order_[1])) {
    throw EvaluationError(Kind::NoDisagreement, "no disagreement on '" + key + "'");
  }
  r.final_flags = std::move(final_flags);
  r.note = std::move(note);
  json event = {{"op", "reconcile"},
                {"approach", codebook::to_string(approach)},
                {"label", key},
                {"final_flags", flags_to_json(r.final_flags)},
                {"note", r.note}};
  reconciliations_[{approach, key}] = std::move(r);
  persist(event);
}

std::vector<Reconciliation> AnnotationStore::reconciliations(Approach approach) const {
  std::shared_lock lock(mutex_);
  std::vector<Reconciliation> out;
  for (const auto& [key, r] : reconciliations_) {
    if (key.first == approach) out.push_back(r);
  }
  return out;
}

std::optional<FlagSet> AnnotationStore::final_flags_locked(Approach approach, const std::string& label) const {
  const auto rec = reconciliations_.find({approach, label});
  if (rec != reconciliations_.end()) return rec->second.final_flags;
  if (!all_completed(approach)) return std::nullopt;
  const auto a = flags_of(raters_.at(rater_order_[0]), approach, label);
  if (a != flags_of(raters_.at(rater_order_[1]), approach, label)) return std::nullopt;
  return a;
}

std::optional<FlagSet> AnnotationStore::final_flags(Approach approach, const std::string& label) const {
  std::shared_lock lock(mutex_);
  return final_flags_locked(approach, label);
}

bool AnnotationStore::finalizable(Approach approach) const {
  std::shared_lock lock(mutex_);
  return all_completed(approach) && unresolved_locked(approach).empty();
}

std::uint64_t AnnotationStore::sequence() const {
  std::shared_lock lock(mutex_);
  return sequence_;
}

json AnnotationStore::snapshot_locked() const {
  json raters = json::array();
  json annotations = json::array();
  json completed = json::array();
  for (const auto& name : rater_order_) {
    const auto& r = raters_.at(name);
    raters.push_back({{"name", name}, {"token", r.token}});
    for (const auto& [key, a] : r.annotations) {
      json j = {{"rater", name},
                {"approach", codebook::to_string(a.approach)},
                {"label", a.label},
                {"flags", flags_to_json(a.flags)}};
      if (!a.note.empty()) j["note"] = a.note;
      annotations.push_back(std::move(j));
    }
    for (const auto a : r.completed) completed.push_back({{"rater", name}, {"approach", codebook::to_string(a)}});
  }
  json recs = json::array();
  for (const auto& [key, r] : reconciliations_) {
    json rater_flags = json::object();
    for (const auto& [name, flags] : r.rater_flags) rater_flags[name] = flags_to_json(flags);
    recs.push_back({{"approach", codebook::to_string(r.approach)},
                    {"label", r.label},
                    {"rater_flags", std::move(rater_flags)},
                    {"final_flags", flags_to_json(r.final_flags)},
                    {"note", r.note}});
  }
  return {{"format", "incode.annotations"},
          {"version", 1},
          {"sequence", sequence_},
          {"raters", std::move(raters)},
          {"annotations", std::move(annotations)},
          {"completed", std::move(completed)},
          {"reconciliations", std::move(recs)}};
}

json AnnotationStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return snapshot_locked();
}

void AnnotationStore::apply(const json& doc) {
  expect_format(doc, "incode.annotations", 1);
  try {
    for (const auto& r : doc.value("raters", json::array())) {
      register_rater(r.at("name").get<std::string>(),
                     r.contains("token") ? std::optional(r.at("token").get<std::string>()) : std::nullopt);
    }
    for (const auto& a : doc.value("annotations", json::array())) {
      record({a.at("rater").get<std::string>(), approach_from_json(a.at("approach")),
              a.at("label").get<std::string>(), flags_from_json(a.at("flags")), a.value("note", "")});
    }
    for (const auto& c : doc.value("completed", json::array())) {
      complete(c.at("rater").get<std::string>(), approach_from_json(c.at("approach")));
    }
    for (const auto& r : doc.value("reconciliations", json::array())) {
      reconcile(approach_from_json(r.at("approach")), r.at("label").get<std::string>(),
                flags_from_json(r.at("final_flags")), r.value("note", ""));
    }
  } catch (const json::exception& e) {
    throw EvaluationError(Kind::InvalidInput, std::string("malformed annotations: ") + e.what());
  }
}

void AnnotationStore::replay(const json& event) {
  json doc = {{"format", "incode.annotations"}, {"version", 1}};
  const auto op = event.at("op").get<std::string>();
  if (op == "register") {
    doc["raters"] = json::array({{{"name", event.at("rater")}, {"token", event.at("token")}}});
  } else if (op == "annotate") {
    doc["annotations"] = json::array({event});
  } else if (op == "complete") {
    doc["completed"] = json::array({event});
  } else if (op == "reconcile") {
    doc["reconciliations"] = json::array({event});
  } else {
    throw EvaluationError(Kind::InvalidInput, "unknown event '" + op + "' in annotation log");
  }
  apply(doc);
}

}  // namespace incode::eval
