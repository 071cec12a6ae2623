// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fidelity.h"
#include "grammar_gen.h"
#include "incode/app/pipeline_runs.h"
#include "incode/codebook/export.h"
#include "incode/codebook/merge.h"
#include "incode/corpus/dataset_io.h"
#include "incode/eval/annotation_store.h"
#include "incode/eval/concept_group.h"
#include "incode/eval/report.h"
#include "incode/segment/segmenter.h"
#include "incode/topic/clustering.h"
#include "incode/topic/embedding.h"
#include "support.h"

using namespace incode;
using codebook::Approach;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::vector<codebook::Codebook> fixture_codebooks() {
  std::vector<codebook::Codebook> out;
  for (const char* n : {"topic", "chunk", "item", "verb"}) {
    out.push_back(codebook::load_codebook(testing::fixture_dir() / (std::string(n) + ".codebook.json")));
  }
  return out;
}

Verdict fixture_counts() {
  const std::vector<std::size_t> expected = {23, 48, 240, 271};
  const auto cbs = fixture_codebooks();
  Verdict v;
  std::ostringstream s;
  for (std::size_t i = 0; i < cbs.size(); ++i) {
    const auto n = codebook::count_codes(cbs[i]);
    s << (i ? " / " : "") << n;
    v.pass = v.pass && n == expected[i];
  }
  v.detail = "counts " + s.str();
  return v;
}

Verdict fixture_flags() {
  const auto cbs = fixture_codebooks();
  eval::AnnotationStore store(eval::catalog_of(cbs));
  store.apply(read_json_file(testing::fixture_dir() / "annotations.json"));
  const auto report = eval::finalize_report(cbs, store);
  const std::vector<std::size_t> ground = {2, 1, 2, 0}, broad = {2, 3, 5, 7};
  Verdict v;
  std::ostringstream g, b;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& row = report.rows.at(i);
    g << (i ? "/" : "") << row.groundedness.size();
    b << (i ? "/" : "") << row.overly_broad.size();
    v.pass = v.pass && row.groundedness.size() == ground[i] && row.overly_broad.size() == broad[i];
  }
  const auto pct = eval::format_percent(report.rows[3].overly_broad.size(), report.rows[3].code_count);
  const auto table = eval::render_report_table(report);
  v.pass = v.pass && !report.draft && pct == "2.58%" && table.find("7 (2.58%)") != std::string::npos;
  v.detail = "groundedness " + g.str() + ", overly broad " + b.str() + ", verb " + pct;
  return v;
}

Verdict feedback_concepts() {
  using Set = std::vector<std::string>;
  const std::vector<std::pair<Approach, Set>> expected = {
      {Approach::Topic, {"iterative development based on user feedback", "user feedback and communication"}},
      {Approach::Chunk,
       {"community feedback", "community feedback loop", "encouragement of user feedback", "user feedback",
        "user feedback and suggestions"}},
      {Approach::Item,
       {"comparative feedback", "positive feedback", "user feedback", "user feedback request",
        "user feedback response", "user feedback solicitation"}},
      {Approach::Verb,
       {"acknowledge feedback", "address feedback process", "consider user feedback", "encourage community feedback",
        "invite feedback", "plan to gather feedback", "provide feedback", "provide positive feedback",
        "provide specific feedback", "solicit user feedback"}},
      {Approach::Human,
       {"appreciation of feedback", "community feedback", "eliciting feedback", "encouraging feedback",
        "invite for feedback", "justified feedback", "positive feedback", "prompting user feedback",
        "reaction to feedback", "response to feedback", "soliciting feedback", "taking feedback",
        "user experience feedback"}},
  };
  auto sources = fixture_codebooks();
  sources.push_back(codebook::load_codebook(testing::fixture_dir() / "human.codebook.json"));
  const auto group = eval::concept_group("feedback", sources);

  Verdict v;
  std::ostringstream s;
  for (const auto& [approach, want] : expected) {
    const auto* got = group.find(approach);
    const Set have = got ? *got : Set{};
    s << (approach == Approach::Topic ? "" : ", ") << codebook::to_string(approach) << " " << have.size() << "/"
      << want.size();
    if (have != want) {
      v.pass = false;
      Set extra, missing;
      std::set_difference(have.begin(), have.end(), want.begin(), want.end(), std::back_inserter(extra));
      std::set_difference(want.begin(), want.end(), have.begin(), have.end(), std::back_inserter(missing));
      if (!extra.empty()) s << " (extra: " << text::join(extra, ", ") << ")";
      if (!missing.empty()) s << " (missing: " << text::join(missing, ", ") << ")";
    }
  }
  v.detail = s.str();
  return v;
}

Verdict oversize_cluster() {
  // 34 documents share three terms and differ in one; 93 share nothing.
  std::vector<corpus::Message> messages;
  const auto base = *corpus::make_timestamp(2017, 10, 1, 0, 0);
  for (int i = 0; i < 127; ++i) {
    corpus::Message m;
    m.id = {1, i};
    m.timestamp = base + std::chrono::minutes(i);
    m.content = i < 34 ? "circuit simulator feedback variant" + std::to_string(i)
                       : "isolated" + std::to_string(i) + " unique" + std::to_string(i);
    messages.push_back(std::move(m));
  }
  const corpus::Dataset ds(std::move(messages), testing::study_metadata());
  topic::TfidfEmbedder embedder;
  const auto clusters = topic::cluster(topic::embed(ds.messages(), embedder), {});
  std::size_t flagged = 0, largest = 0;
  bool flagged_is_34 = false;
  for (const auto& c : clusters) {
    largest = std::max(largest, c.members.size());
    if (c.oversize_flag) {
      ++flagged;
      flagged_is_34 = c.members.size() == 34;
    }
  }
  Verdict v;
  v.pass = flagged == 1 && flagged_is_34 && largest == 34 && clusters.size() == 94;
  v.detail = std::to_string(clusters.size()) + " clusters, largest " + std::to_string(largest) + " (" +
             eval::format_percent(largest, 127) + "), flagged " + std::to_string(flagged);
  return v;
}

Verdict segmentation_properties() {
  using std::chrono::minutes;
  Verdict v;
  // (a) every min_gap from one minute to eight days.
  const auto sample = testing::sample_dataset();
  const auto pos58 = *sample.position({2, 58});
  int misses = 0;
  for (int gap = 1; gap <= 8 * 1440; ++gap) {
    const auto b = segment::gap_boundaries(sample, minutes(gap));
    if (std::find(b.begin(), b.end(), pos58) == b.end()) ++misses;
  }
  // (b) partition over random datasets, both methods.
  std::mt19937_64 rng(99);
  int broken = 0;
  // (c) context sizes.
  int bad_context = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> at;
    int t = 0;
    for (std::size_t i = 0, n = rng() % 80; i < n; ++i) {
      t += rng() % 6 == 0 ? static_cast<int>(rng() % 3000) : static_cast<int>(rng() % 15);
      at.push_back(t);
    }
    const auto ds = testing::dataset_at_minutes(at);
    segment::SegmentationConfig config;
    config.min_gap = minutes(1 + static_cast<int>(rng() % 600));
    config.min_chunk_size = 1 + rng() % 5;
    if (trial % 2) {
      config.method = segment::SegmentationMethod::SmoothedActivity;
      config.kernel_bandwidth = minutes(5 + static_cast<int>(rng() % 120));
    }
    const auto k = static_cast<std::size_t>(rng() % 6);
    const auto chunks = segment::attach_context(segment::segment(ds, config), k);
    std::vector<corpus::MessageId> seen;
    for (const auto& c : chunks) {
      if (c.core_ids.empty()) ++broken;
      seen.insert(seen.end(), c.core_ids.begin(), c.core_ids.end());
    }
    bool same = seen.size() == ds.size();
    for (std::size_t i = 0; same && i < seen.size(); ++i) same = seen[i] == ds.messages()[i].id;
    if (!same) ++broken;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      const auto lead = i ? std::min(k, chunks[i - 1].core_ids.size()) : 0;
      const auto trail = i + 1 < chunks.size() ? std::min(k, chunks[i + 1].core_ids.size()) : 0;
      if (chunks[i].leading_context_ids.size() != lead || chunks[i].trailing_context_ids.size() != trail) {
        ++bad_context;
      }
    }
  }
  // Context on the study corpus with k = 3.
  const auto study = testing::study_dataset();
  const auto chunks = segment::attach_context(segment::segment(study, {}), 3);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const auto lead = i ? std::min<std::size_t>(3, chunks[i - 1].core_ids.size()) : 0;
    const auto trail = i + 1 < chunks.size() ? std::min<std::size_t>(3, chunks[i + 1].core_ids.size()) : 0;
    if (chunks[i].leading_context_ids.size() != lead || chunks[i].trailing_context_ids.size() != trail) ++bad_context;
  }
  v.pass = misses == 0 && broken == 0 && bad_context == 0;
  v.detail = "boundary misses " + std::to_string(misses) + ", partition failures " + std::to_string(broken) +
             ", context mismatches " + std::to_string(bad_context);
  return v;
}

Verdict parser_round_trips() {
  std::mt19937_64 rng(6);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto r = testing::random_topic_label(rng);
    try {
      if (coding::parse_topic_label(coding::format_topic_label(r)) != r) ++failures;
    } catch (const ParseError&) {
      ++failures;
    }
  }
  for (int i = 0; i < 1000; ++i) {
    const auto r = testing::random_chunk_codebook(rng);
    if (coding::parse_chunk_codebook(coding::format_chunk_codebook(r)).response != r) ++failures;
  }
  for (int i = 0; i < 1000; ++i) {
    const auto r = testing::random_item_tags(rng);
    const auto vocab = i % 2 ? coding::TagVocabulary::Interpretations : coding::TagVocabulary::Tags;
    try {
      if (coding::parse_item_tags(coding::format_item_tags(r, vocab), r.tags_per_message.size()) != r) ++failures;
    } catch (const ParseError&) {
      ++failures;
    }
  }
  // 35 numbered lines for a 36-message window must be rejected.
  coding::ItemTagResponse short_list;
  short_list.tags_per_message.assign(35, {"tag 1", "tag 2", "tag 3"});
  bool rejected = false;
  try {
    coding::parse_item_tags(coding::format_item_tags(short_list, coding::TagVocabulary::Tags), 36);
  } catch (const ParseError& e) {
    rejected = std::string(e.what()) == "tag-count mismatch (got 35, expected 36)";
  }
  Verdict v;
  v.pass = failures == 0 && rejected;
  v.detail = "3000 cases, " + std::to_string(failures) + " failures, mismatch " + (rejected ? "rejected" : "accepted");
  return v;
}

int run_cli(const std::string& args) {
  const auto cmd = std::string("'") + INCODE_CLI_PATH + "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict end_to_end_determinism() {
  testing::TempDir dir;
  const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
  Verdict v;
  if (run_cli("ingest " + q(testing::source_dir() / "data" / "physics_lab.tsv") + " --base-year 2017 --out " +
              q(dir / "dataset.json")) != 0) {
    return {false, "ingest failed"};
  }
  for (const char* ws : {"a", "b"}) {
    if (run_cli("run --approach all --backend mock --seed 7 --dataset " + q(dir / "dataset.json") + " --workspace " +
                q(dir / ws)) != 0) {
      return {false, std::string("run into workspace ") + ws + " failed"};
    }
  }
  int differing = 0;
  const auto dataset = corpus::load_dataset(dir / "dataset.json");
  int order_sensitive = 0;
  std::mt19937_64 rng(7);
  for (auto a : codebook::kMachineApproaches) {
    const auto name = std::string(codebook::to_string(a));
    const auto cb = "codebooks/" + name + ".codebook.json";
    if (read_text_file(dir / "a" / cb) != read_text_file(dir / "b" / cb)) ++differing;

    // Shuffled chunk results merge to the same codebook.
    const auto responses = read_json_file(dir / "a" / ("responses/" + name + ".responses.json"));
    const auto reference = app::aggregate(responses, dataset);
    auto instances = app::instances_from_responses(responses);
    for (int s = 0; s < 5; ++s) {
      std::shuffle(instances.begin(), instances.end(), rng);
      const auto merged = codebook::merge(instances, a, dataset, reference.metadata());
      if (merged != reference) ++order_sensitive;
    }
    if (reference != codebook::load_codebook(dir / "a" / cb)) ++differing;
  }
  v.pass = differing == 0 && order_sensitive == 0;
  v.detail = std::to_string(differing) + " differing artifacts, " + std::to_string(order_sensitive) +
             " order-sensitive merges";
  return v;
}

Verdict prompt_fidelity() {
  const auto r = testing::check_prompt_fidelity();
  return {r.ok, r.ok ? "4 approaches, verb edits exact" : text::join(r.failures, "; ")};
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Verdict()> check;
    long budget_ms;  // 0: no time limit
  };
  const std::vector<Criterion> criteria = {
      {"fixture code counts 23 / 48 / 240 / 271", fixture_counts, 1000},
      {"fixture flags and 2.58%", fixture_flags, 0},
      {"feedback concept groups 2/5/6/10 and 13", feedback_concepts, 1000},
      {"oversize cluster of 34 in 127 flagged", oversize_cluster, 0},
      {"segmentation properties", segmentation_properties, 10000},
      {"response grammar round-trips", parser_round_trips, 30000},
      {"end-to-end mock determinism", end_to_end_determinism, 60000},
      {"prompt fidelity", prompt_fidelity, 0},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].budget_ms && ms > criteria[i].budget_ms) {
      v.pass = false;
      v.detail += "; over the " + std::to_string(criteria[i].budget_ms) + " ms budget";
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].name << " [" << v.detail << "] ("
              << ms << " ms)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
