#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <iostream>
#include <memory>

#include "incode/app/pipeline_runs.h"
#include "incode/app/server.h"
#include "incode/app/workspace.h"
#include "incode/codebook/export.h"
#include "incode/corpus/dataset_io.h"
#include "incode/corpus/ingest.h"
#include "incode/eval/concept_group.h"
#include "incode/eval/report.h"
#include "incode/segment/chunk_io.h"

namespace {

using namespace incode;
namespace fs = std::filesystem;

struct BackendFlags {
  std::string kind = "mock";
  std::uint64_t seed = 0;
  std::string record_dir;
  std::string replay_dir;
  std::string recorded_id;
  std::string transcript;
};

void add_backend_flags(CLI::App* cmd, BackendFlags& f) {
  cmd->add_option("--backend", f.kind, "live, replay or mock")->check(CLI::IsMember({"live", "replay", "mock"}));
  cmd->add_option("--seed", f.seed, "run seed (mock responses, sampling seed)");
  cmd->add_option("--record", f.record_dir, "write a replay fixture per exchange into this directory");
  cmd->add_option("--replay-dir", f.replay_dir, "fixture directory for --backend replay");
  cmd->add_option("--recorded-backend", f.recorded_id, "backend id the fixtures were recorded with");
  cmd->add_option("--transcript", f.transcript, "append every exchange to this JSON Lines file");
}

std::shared_ptr<llm::Backend> make_backend(const BackendFlags& f, std::shared_ptr<llm::LiveBackend>* live) {
  if (f.kind == "mock") return std::make_shared<llm::MockBackend>(f.seed);
  if (f.kind == "replay") {
    if (f.replay_dir.empty()) throw ConfigError("--backend replay needs --replay-dir");
    auto id = f.recorded_id;
    if (id.empty()) {
      const char* model = std::getenv("GATEWAY_MODEL");
      id = "live:" + std::string(model && *model ? model : "gpt-4o");
    }
    return std::make_shared<llm::ReplayBackend>(llm::FixtureStore(f.replay_dir), id);
  }
  auto backend = std::make_shared<llm::LiveBackend>(llm::LiveConfig::from_env());
  if (live) *live = backend;
  return backend;
}


segment::ChunkFile default_chunks(const corpus::Dataset& dataset) {
  segment::ChunkFile file;
  file.dataset_digest = corpus::dataset_digest(dataset);
  file.chunks = segment::attach_context(segment::segment(dataset, file.config), file.context_size);
  return file;
}

std::vector<codebook::Approach> parse_approaches(const std::string& s) {
  if (s == "all") return {std::begin(codebook::kMachineApproaches), std::end(codebook::kMachineApproaches)};
  const auto a = codebook::parse_approach(s);
  if (!a || *a == codebook::Approach::Human) throw CLI::ValidationError("--approach", "unknown approach '" + s + "'");
  return {*a};
}

std::atomic<app::ReviewServer*> g_server{nullptr};

void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inductive coding pipelines and evaluation workflow"};
  app.require_subcommand(1);
  std::function<int()> action;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse a delimited or JSON Lines conversation file");
  std::string ingest_src, ingest_out, ingest_meta;
  int base_year = 0;
  ingest->add_option("source", ingest_src)->required()->check(CLI::ExistingFile);
  ingest->add_option("--base-year", base_year, "year of the first message when timestamps omit it");
  ingest->add_option("--meta", ingest_meta, "metadata JSON (research_question, coding_notes, language_note)");
  ingest->add_option("--out", ingest_out)->required();
  ingest->callback([&] {
    action = [&] {
      corpus::IngestOptions options;
      if (base_year != 0) options.base_year = base_year;
      fs::path meta_path = ingest_meta;
      if (meta_path.empty()) {
        auto sibling = fs::path(ingest_src);
        sibling.replace_extension(".meta.json");
        if (fs::exists(sibling)) meta_path = sibling;
      }
      if (!meta_path.empty()) {
        const auto m = read_json_file(meta_path);
        options.metadata.research_question = m.value("research_question", "");
        options.metadata.coding_notes = m.value("coding_notes", "");
        options.metadata.language_note = m.value("language_note", "");
      }
      try {
        const auto result = corpus::ingest_dataset(ingest_src, options);
        for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
        corpus::save_dataset(ingest_out, result.dataset);
        std::cout << result.dataset.size() << " messages\n";
      } catch (const corpus::IngestError& e) {
        for (const auto& r : e.records()) std::cerr << ingest_src << ":" << r.line << ": " << r.message << "\n";
        throw;
      }
      return 0;
    };
  });

  // segment
  auto* seg = app.add_subcommand("segment", "Split a dataset into chunks with context windows");
  std::string seg_dataset, seg_out, seg_method = "gap";
  int min_gap = 180, bandwidth = 30;
  std::size_t min_chunk = 3, context = 3;
  seg->add_option("dataset", seg_dataset)->required()->check(CLI::ExistingFile);
  seg->add_option("--method", seg_method)->check(CLI::IsMember({"gap", "activity"}));
  seg->add_option("--min-gap-min", min_gap);
  seg->add_option("--bandwidth-min", bandwidth);
  seg->add_option("--min-chunk", min_chunk);
  seg->add_option("--context", context);
  seg->add_option("--out", seg_out)->required();
  seg->callback([&] {
    action = [&] {
      const auto dataset = corpus::load_dataset(seg_dataset);
      segment::ChunkFile file;
      file.dataset_digest = corpus::dataset_digest(dataset);
      file.config.method = seg_method == "gap" ? segment::SegmentationMethod::GapThreshold
                                               : segment::SegmentationMethod::SmoothedActivity;
      file.config.min_gap = std::chrono::minutes(min_gap);
      file.config.kernel_bandwidth = std::chrono::minutes(bandwidth);
      file.config.min_chunk_size = min_chunk;
      file.context_size = context;
      file.chunks = segment::attach_context(segment::segment(dataset, file.config), context);
      segment::save_chunks(seg_out, file);
      std::cout << file.chunks.size() << " chunks\n";
      return 0;
    };
  });

  // run
  auto* run = app.add_subcommand("run", "Run coding pipelines");
  std::string run_approach_pos, run_approach = "all", run_dataset, run_chunks, run_out, workspace_dir = ".";
  std::string carry = "on", embedder_kind = "tfidf";
  BackendFlags backend;
  app::RunOptions run_options;
  run->add_option("approach_name", run_approach_pos, "topic, chunk, item, verb or all");
  run->add_option("--approach", run_approach, "topic, chunk, item, verb or all");
  run->add_option("--dataset", run_dataset)->required()->check(CLI::ExistingFile);
  run->add_option("--chunks", run_chunks, "chunk file (defaults: gap segmentation, 180 min)")->check(CLI::ExistingFile);
  run->add_option("--workspace", workspace_dir);
  run->add_option("--out", run_out, "responses file (single approach only)");
  run->add_option("--carry", carry)->check(CLI::IsMember({"on", "off"}));
  run->add_option("--threshold", run_options.topic.cluster.distance_threshold, "cosine distance cut in (0, 2)");
  run->add_option("--top-k", run_options.topic.top_k);
  run->add_option("--oversize", run_options.topic.cluster.oversize_ratio);
  run->add_option("--embedder", embedder_kind)->check(CLI::IsMember({"tfidf", "remote"}));
  run->add_option("--workers", run_options.workers);
  add_backend_flags(run, backend);
  run->callback([&] {
    action = [&] {
      const auto approaches = parse_approaches(run_approach_pos.empty() ? run_approach : run_approach_pos);
      const auto dataset = corpus::load_dataset(run_dataset);
      const auto chunks = run_chunks.empty() ? default_chunks(dataset) : segment::load_chunks(run_chunks);
      if (chunks.dataset_digest != corpus::dataset_digest(dataset)) {
        throw ConfigError("chunk file was produced from a different dataset");
      }
      std::shared_ptr<llm::LiveBackend> live;
      auto be = make_backend(backend, &live);
      llm::SamplingParams sampling;
      sampling.seed = backend.seed;
      auto transcript = backend.transcript.empty() ? std::make_shared<llm::TranscriptLog>()
                                                   : std::make_shared<llm::TranscriptLog>(backend.transcript);
      std::optional<llm::FixtureStore> recorder;
      if (!backend.record_dir.empty()) recorder.emplace(backend.record_dir);
      llm::Gateway gateway(be, sampling, transcript, recorder);

      std::unique_ptr<topic::Embedder> embedder;
      if (embedder_kind == "remote") {
        if (!live) live = std::make_shared<llm::LiveBackend>(llm::LiveConfig::from_env());
        embedder = std::make_unique<topic::RemoteEmbedder>(live);
      } else {
        embedder = std::make_unique<topic::TfidfEmbedder>();
      }
      run_options.carry = carry == "on";
      run_options.seed = backend.seed;
      const app::RunInputs inputs{dataset, chunks, gateway, *embedder};

      if (!run_out.empty()) {
        if (approaches.size() != 1) throw CLI::ValidationError("--out", "needs a single approach");
        write_json_file(run_out, app::run_approach(approaches.front(), inputs, run_options));
        std::cout << run_out << "\n";
        return 0;
      }
      const app::Workspace ws(workspace_dir);
      const auto manifest = app::run_pipelines(ws, approaches, inputs, run_options);
      for (const auto& a : manifest.artifacts) std::cout << a.path << "\n";
      return 0;
    };
  });

  // aggregate
  auto* agg = app.add_subcommand("aggregate", "Merge a responses file into a codebook");
  std::string agg_src, agg_dataset, agg_out;
  agg->add_option("responses", agg_src)->required()->check(CLI::ExistingFile);
  agg->add_option("--dataset", agg_dataset)->required()->check(CLI::ExistingFile);
  agg->add_option("--out", agg_out)->required();
  agg->callback([&] {
    action = [&] {
      std::vector<std::string> warnings;
      const auto cb = app::aggregate(read_json_file(agg_src), corpus::load_dataset(agg_dataset), &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      codebook::save_codebook(agg_out, cb);
      std::cout << cb.size() << " codes\n";
      return 0;
    };
  });

  // export
  auto* exp = app.add_subcommand("export", "Render a codebook as a table or structured document");
  std::string exp_src, exp_format = "table", exp_out;
  exp->add_option("codebook", exp_src)->required()->check(CLI::ExistingFile);
  exp->add_option("--format", exp_format)->check(CLI::IsMember({"table", "structured"}));
  exp->add_option("--out", exp_out);
  exp->callback([&] {
    action = [&] {
      const auto doc = codebook::export_codebook(codebook::load_codebook(exp_src),
                                                 *codebook::parse_export_format(exp_format));
      if (exp_out.empty()) {
        std::cout << doc;
      } else {
        write_text_file(exp_out, doc);
      }
      return 0;
    };
  });

  // report
  auto* rep = app.add_subcommand("report", "Code counts and reconciled flags per approach");
  std::string rep_approach = "all", rep_format = "table";
  bool rep_final = false;
  rep->add_option("--workspace", workspace_dir);
  rep->add_option("--approach", rep_approach);
  rep->add_option("--format", rep_format)->check(CLI::IsMember({"table", "json"}));
  rep->add_flag("--final", rep_final, "fail unless every disagreement is reconciled");
  rep->callback([&] {
    action = [&] {
      const app::Workspace ws(workspace_dir);
      auto codebooks = ws.machine_codebooks();
      if (rep_approach != "all") {
        const auto wanted = parse_approaches(rep_approach).front();
        std::erase_if(codebooks, [&](const auto& cb) { return cb.approach() != wanted; });
      }
      const auto store = ws.open_annotations();
      const auto report = rep_final ? eval::finalize_report(codebooks, *store) : eval::metrics_report(codebooks, *store);
      std::cout << (rep_format == "json" ? eval::to_json(report).dump(1) + "\n" : eval::render_report_table(report));
      return 0;
    };
  });

  // concepts
  auto* con = app.add_subcommand("concepts", "Codes around one concept, per approach");
  std::string keyword;
  con->add_option("keyword", keyword)->required();
  con->add_option("--workspace", workspace_dir);
  con->callback([&] {
    action = [&] {
      const auto group = eval::concept_group(keyword, app::Workspace(workspace_dir).codebooks());
      for (const auto& [approach, labels] : group.members) {
        std::cout << codebook::display_name(approach) << " (" << labels.size() << ")\n";
        for (const auto& l : labels) std::cout << "  " << l << "\n";
      }
      return 0;
    };
  });

  // serve
  auto* srv = app.add_subcommand("serve", "HTTP API for review and reconciliation");
  app::ServerOptions server_options;
  std::string static_dir;
  srv->add_option("--workspace", workspace_dir);
  srv->add_option("--host", server_options.host);
  srv->add_option("--port", server_options.port);
  srv->add_option("--static", static_dir, "directory with the built review UI")->check(CLI::ExistingDirectory);
  srv->callback([&] {
    action = [&] {
      if (!static_dir.empty()) server_options.static_dir = static_dir;
      app::ReviewServer server(app::Workspace(workspace_dir), server_options);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << server_options.host << ":" << server_options.port << "\n";
      server.run();
      g_server = nullptr;
      return 0;
    };
  });

  // fixtures load
  auto* fix = app.add_subcommand("fixtures", "Install fixture codebooks and annotations");
  fix->require_subcommand(1);
  auto* fix_load = fix->add_subcommand("load", "Copy <dir>/*.codebook.json and annotations.json into the workspace");
  std::string fix_dir;
  fix_load->add_option("dir", fix_dir)->required();
  fix_load->add_option("--workspace", workspace_dir);
  fix_load->callback([&] {
    action = [&] {
      const auto result = app::load_fixtures(fix_dir, app::Workspace(workspace_dir));
      for (const auto& [approach, count] : result.counts) {
        std::cout << codebook::to_string(approach) << ": " << count << " codes\n";
      }
      if (result.annotations_loaded) std::cout << "annotations loaded\n";
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action ? action() : 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
