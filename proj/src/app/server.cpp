#include "incode/app/server.h"

#include <httplib.h>

#include "incode/codebook/export.h"
#include "incode/eval/concept_group.h"
#include "incode/eval/report.h"

namespace incode::app {

namespace {

using codebook::Approach;
using eval::EvaluationError;

constexpr const char* kTokenHeader = "X-Rater-Token";

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view reason, const std::string& message) {
  send_json(res, {{"error", reason}, {"message", message}}, status);
}

int status_for(EvaluationError::Kind kind) {
  using K = EvaluationError::Kind;
  switch (kind) {
    case K::InvalidInput: return 400;
    case K::Unauthorized: return 401;
    case K::UnknownRater:
    case K::UnknownCode: return 404;
    default: return 409;
  }
}

// Maps every failure onto a status with a machine-readable reason.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const EvaluationError& e) {
      send_error(res, status_for(e.kind()), e.reason(), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "invalid_payload", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

json parse_body(const httplib::Request& req) {
  auto body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw EvaluationError(EvaluationError::Kind::InvalidInput, "request body must be a JSON object");
  }
  return body;
}

Approach approach_param(const std::string& s) {
  const auto a = codebook::parse_approach(s);
  if (!a) throw EvaluationError(EvaluationError::Kind::UnknownCode, "unknown approach '" + s + "'");
  return *a;
}

Approach machine_approach(const json& j) {
  if (!j.is_string()) throw EvaluationError(EvaluationError::Kind::InvalidInput, "approach must be a string");
  const auto a = codebook::parse_approach(j.get<std::string>());
  if (!a || *a == Approach::Human) {
    throw EvaluationError(EvaluationError::Kind::InvalidInput, "unknown approach " + j.dump());
  }
  return *a;
}

std::string string_field(const json& body, const char* key, bool required = true) {
  if (!body.contains(key)) {
    if (required) throw EvaluationError(EvaluationError::Kind::InvalidInput, std::string("missing '") + key + "'");
    return {};
  }
  if (!body.at(key).is_string()) {
    throw EvaluationError(EvaluationError::Kind::InvalidInput, std::string("'") + key + "' must be a string");
  }
  return body.at(key).get<std::string>();
}

json annotation_json(const eval::Annotation& a) {
  return {{"rater", a.rater},
          {"approach", codebook::to_string(a.approach)},
          {"label", a.label},
          {"flags", eval::flags_to_json(a.flags)},
          {"note", a.note}};
}

}  // namespace

struct ReviewServer::State {
  std::vector<codebook::Codebook> codebooks;  // includes the human column when present
  std::unique_ptr<eval::AnnotationStore> store;

  const codebook::Codebook& codebook(Approach a) const {
    for (const auto& cb : codebooks) {
      if (cb.approach() == a) return cb;
    }
    throw EvaluationError(EvaluationError::Kind::UnknownCode,
                          "no codebook for " + std::string(codebook::to_string(a)));
  }

  std::vector<codebook::Codebook> machine() const {
    auto out = codebooks;
    std::erase_if(out, [](const auto& cb) { return cb.approach() == Approach::Human; });
    return out;
  }

  // Throws unless the request carries the rater's token.
  void authorize(const httplib::Request& req, const std::string& rater) const {
    const auto known = store->raters();
    if (std::find(known.begin(), known.end(), rater) == known.end()) {
      throw EvaluationError(EvaluationError::Kind::UnknownRater, "unknown rater '" + rater + "'");
    }
    if (!store->authenticate(rater, req.get_header_value(kTokenHeader))) {
      throw EvaluationError(EvaluationError::Kind::Unauthorized, "missing or wrong rater token");
    }
  }
};

ReviewServer::ReviewServer(Workspace workspace, ServerOptions options)
    : workspace_(std::move(workspace)),
      options_(std::move(options)),
      state_(std::make_unique<State>()),
      http_(std::make_unique<httplib::Server>()) {
  state_->codebooks = workspace_.codebooks();
  state_->store = workspace_.open_annotations();
  install_routes();
}

ReviewServer::~ReviewServer() { stop(); }

void ReviewServer::install_routes() {
  auto& s = *http_;
  State& st = *state_;

  s.Get("/codebooks", guarded([&st](const httplib::Request&, httplib::Response& res) {
    json list = json::array();
    for (const auto& cb : st.machine()) {
      list.push_back({{"approach", codebook::to_string(cb.approach())},
                      {"name", codebook::display_name(cb.approach())},
                      {"count", cb.size()}});
    }
    send_json(res, {{"codebooks", list}});
  }));

  s.Get(R"(/codebooks/([^/]+))", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    send_json(res, codebook::to_json(st.codebook(approach_param(req.matches[1]))));
  }));

  s.Get(R"(/codes/([^/]+)/([^/]+)/examples)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto& cb = st.codebook(approach_param(req.matches[1]));
    const auto label = httplib::detail::decode_url(req.matches[2], false);
    const auto* code = cb.find(label);
    if (!code) throw EvaluationError(EvaluationError::Kind::UnknownCode, "unknown code '" + label + "'");
    json examples = json::array();
    for (const auto& ex : code->examples) {
      examples.push_back({{"id", ex.id.str()},
                          {"speaker_role", corpus::to_string(ex.speaker_role)},
                          {"content", ex.content}});
    }
    send_json(res, {{"label", code->normalized_label},
                    {"display_label", code->display_label},
                    {"definition", code->definition ? json(*code->definition) : json(nullptr)},
                    {"examples", examples}});
  }));

  s.Post("/raters", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const auto name = string_field(body, "name");
    const auto token = st.store->register_rater(name);
    send_json(res, {{"name", name}, {"token", token}}, 201);
  }));

  s.Get(R"(/annotations/([^/]+))", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto rater = httplib::detail::decode_url(req.matches[1], false);
    st.authorize(req, rater);
    json list = json::array();
    for (const auto& a : st.store->annotations(rater)) list.push_back(annotation_json(a));
    json completed = json::array();
    for (const auto& cb : st.machine()) {
      if (st.store->completed(rater, cb.approach())) completed.push_back(codebook::to_string(cb.approach()));
    }
    send_json(res, {{"rater", rater}, {"annotations", list}, {"completed", completed}});
  }));

  s.Put(R"(/annotations/([^/]+))", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto rater = httplib::detail::decode_url(req.matches[1], false);
    st.authorize(req, rater);
    const auto body = parse_body(req);
    eval::Annotation a;
    a.rater = rater;
    a.approach = machine_approach(body.value("approach", json()));
    a.label = string_field(body, "label");
    a.flags = eval::flags_from_json(body.value("flags", json::array()));
    a.note = string_field(body, "note", false);
    st.store->record(a);
    a.label = codebook::normalize_label(a.label);
    send_json(res, annotation_json(a));
  }));

  s.Post(R"(/annotations/([^/]+)/complete)", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto rater = httplib::detail::decode_url(req.matches[1], false);
    st.authorize(req, rater);
    const auto approach = machine_approach(parse_body(req).value("approach", json()));
    st.store->complete(rater, approach);
    send_json(res, {{"rater", rater}, {"approach", codebook::to_string(approach)}, {"completed", true}});
  }));

  s.Get(R"(/disagreements/([^/]+))", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto approach = approach_param(req.matches[1]);
    json list = json::array();
    std::size_t open = 0;
    for (const auto& d : st.store->disagreements(approach)) {
      json flags = json::object();
      for (const auto& [name, f] : d.rater_flags) flags[name] = eval::flags_to_json(f);
      list.push_back({{"label", d.label}, {"rater_flags", flags}, {"rater_notes", d.rater_notes},
                      {"resolved", d.resolved}});
      if (!d.resolved) ++open;
    }
    bool ready = true;
    for (const auto& r : st.store->raters()) ready = ready && st.store->completed(r, approach);
    ready = ready && st.store->raters().size() == eval::AnnotationStore::kMaxRaters;
    send_json(res, {{"approach", codebook::to_string(approach)},
                    {"raters_completed", ready},
                    {"unresolved", open},
                    {"disagreements", list}});
  }));

  s.Post("/reconciliations", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const auto approach = machine_approach(body.value("approach", json()));
    const auto label = string_field(body, "label");
    const auto flags = eval::flags_from_json(body.value("final_flags", json::array()));
    st.store->reconcile(approach, label, flags, string_field(body, "note", false));
    send_json(res, {{"approach", codebook::to_string(approach)},
                    {"label", codebook::normalize_label(label)},
                    {"final_flags", eval::flags_to_json(flags)}},
              201);
  }));

  s.Get("/report", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto report = eval::metrics_report(st.machine(), *st.store);
    if (req.get_param_value("format") == "table") {
      res.set_content(eval::render_report_table(report), "text/markdown; charset=utf-8");
      return;
    }
    auto body = eval::to_json(report);
    body["table"] = eval::render_report_table(report);
    send_json(res, body);
  }));

  s.Get("/concept-groups", guarded([&st](const httplib::Request& req, httplib::Response& res) {
    const auto keyword = req.get_param_value("keyword");
    if (keyword.find_first_not_of(" \t") == std::string::npos) {
      throw EvaluationError(EvaluationError::Kind::InvalidInput, "keyword is required");
    }
    const auto group = eval::concept_group(keyword, st.codebooks);
    json members = json::object();
    json counts = json::object();
    for (const auto& [approach, labels] : group.members) {
      members[std::string(codebook::to_string(approach))] = labels;
      counts[std::string(codebook::to_string(approach))] = labels.size();
    }
    send_json(res, {{"keyword", group.keyword}, {"stem", group.stem}, {"members", members}, {"counts", counts}});
  }));

  if (options_.static_dir) {
    if (!s.set_mount_point("/", options_.static_dir->string())) {
      throw IoError("static directory not found: " + options_.static_dir->string());
    }
  }
}

int ReviewServer::bind() {
  if (options_.port == 0) {
    port_ = http_->bind_to_any_port(options_.host);
  } else if (http_->bind_to_port(options_.host, options_.port)) {
    port_ = options_.port;
  } else {
    port_ = -1;
  }
  if (port_ <= 0) throw IoError("cannot bind " + options_.host + ":" + std::to_string(options_.port));
  return port_;
}

int ReviewServer::start() {
  bind();
  thread_ = std::make_unique<std::thread>([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port_;
}

void ReviewServer::run() {
  bind();
  http_->listen_after_bind();
}

void ReviewServer::stop() {
  if (http_) http_->stop();
  if (thread_ && thread_->joinable()) thread_->join();
  thread_.reset();
}

}  // namespace incode::app
