#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "incode/codebook/codebook.h"
#include "incode/codebook/export.h"
#include "incode/codebook/merge.h"
#include "support.h"

using namespace incode;
using namespace incode::codebook;
using corpus::MessageId;

TEST_CASE("label normalization") {
  CHECK(normalize_label("User Feedback ") == "user feedback");
  CHECK(normalize_label("multi-language support") == "multi language support");
  CHECK(normalize_label("  snake_case,  and\tTabs!! ") == "snake case and tabs");
  CHECK(normalize_label("Café Über") == "café Über");
  CHECK_THROWS_WITH(normalize_label(" -_- "), "label empty after normalization");
  CHECK_THROWS(normalize_label(""));
}

TEST_CASE("normalization is idempotent") {
  std::mt19937_64 rng(11);
  const std::string alphabet = "aZ -_.,!?'\t\n9\xC3\xA9";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const auto n = rng() % 20;
    for (std::size_t k = 0; k < n; ++k) s += alphabet[rng() % alphabet.size()];
    std::string once;
    try {
      once = normalize_label(s);
    } catch (const Error&) {
      continue;
    }
    CHECK(normalize_label(once) == once);
  }
}

TEST_CASE("approach names") {
  for (auto a : {Approach::Topic, Approach::Chunk, Approach::Item, Approach::Verb, Approach::Human}) {
    CHECK(parse_approach(to_string(a)) == a);
  }
  CHECK_FALSE(parse_approach("bert").has_value());
  CHECK(display_name(Approach::Verb) == "Item-Level Coding w/ Verb Phrases");
}

TEST_CASE("merge joins a label emitted by several chunks") {
  const auto ds = testing::study_dataset();
  std::vector<RawCodeInstance> in = {
      {"Participatory Design", 0, 0, {{2, 3}}, std::nullopt},
      {"participatory design", 4, 1, {{2, 10}, {2, 3}}, std::string("From chunk 4.")},
      {"participatory-design", 2, 0, {{2, 5}}, std::string("From chunk 2.")},
  };
  std::vector<std::string> warnings;
  const auto cb = merge(in, Approach::Chunk, ds, {}, &warnings);
  REQUIRE(cb.size() == 1);
  const auto& code = cb.codes()[0];
  CHECK(code.display_label == "Participatory Design");
  CHECK(code.definition == "From chunk 2.");  // chunk 2 precedes chunk 4
  CHECK(code.provenance.chunks == std::vector<std::size_t>{0, 2, 4});
  REQUIRE(code.examples.size() == 3);
  CHECK(code.examples[0].id == MessageId{2, 3});
  CHECK(code.examples[2].id == MessageId{2, 10});
  CHECK(code.examples[0].content == "I'll upload one now... Are you a teacher?");
  CHECK(warnings.empty());
}

TEST_CASE("synonymous labels stay separate") {
  const auto ds = testing::study_dataset();
  const auto cb = merge({{"resource sharing", 0, 0, {{2, 3}}, {}}, {"sharing resources", 0, 1, {{2, 3}}, {}}},
                        Approach::Chunk, ds);
  CHECK(cb.size() == 2);
  CHECK(cb.find("Resource Sharing") != nullptr);
  CHECK(cb.find("sharing resources") != nullptr);
}

TEST_CASE("merging nothing gives an empty codebook") {
  const auto ds = testing::study_dataset();
  const auto cb = merge({}, Approach::Item, ds);
  CHECK(cb.empty());
  CHECK(count_codes(cb) == 0);
}

TEST_CASE("merge drops empty labels and rejects unknown messages") {
  const auto ds = testing::study_dataset();
  std::vector<std::string> warnings;
  const auto cb = merge({{"--", 0, 0, {{2, 3}}, {}}, {"ok", 0, 1, {}, {}}}, Approach::Item, ds, {}, &warnings);
  CHECK(cb.size() == 1);
  CHECK(warnings.size() == 1);
  CHECK_THROWS(merge({{"x", 0, 0, {{99, 99}}, {}}}, Approach::Item, ds));
}

TEST_CASE("verb approach flags non-verb labels but keeps them") {
  const auto ds = testing::study_dataset();
  const auto cb = merge({{"acknowledge feedback", 0, 0, {{2, 3}}, {}}, {"emoji", 0, 1, {{2, 5}}, {}}},
                        Approach::Verb, ds);
  REQUIRE(cb.size() == 2);
  CHECK_FALSE(cb.find("acknowledge feedback")->flags.verb_nonconforming);
  CHECK(cb.find("emoji")->flags.verb_nonconforming);
  const auto item = merge({{"emoji", 0, 1, {{2, 5}}, {}}}, Approach::Item, ds);
  CHECK_FALSE(item.find("emoji")->flags.verb_nonconforming);
}

TEST_CASE("merge is insensitive to instance order and never invents labels") {
  const auto ds = testing::study_dataset();
  std::mt19937_64 rng(5);
  const std::vector<std::string> labels = {"feedback", "Feedback", "bug report", "bug-report", "thanks", "help"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RawCodeInstance> in;
    const auto n = rng() % 25;
    for (std::size_t i = 0; i < n; ++i) {
      RawCodeInstance r;
      r.raw_label = labels[rng() % labels.size()];
      r.chunk_index = rng() % 5;
      r.ordinal = i;
      for (std::size_t k = rng() % 3; k > 0; --k) {
        r.message_refs.push_back(ds.messages()[rng() % ds.size()].id);
      }
      if (rng() % 2) r.definition = "def " + std::to_string(i);
      in.push_back(std::move(r));
    }
    const auto reference = merge(in, Approach::Chunk, ds);
    CHECK(reference.size() <= in.size());
    for (int s = 0; s < 3; ++s) {
      std::shuffle(in.begin(), in.end(), rng);
      CHECK(merge(in, Approach::Chunk, ds) == reference);
    }
    for (const auto& code : reference.codes()) {
      CHECK(code.normalized_label == normalize_label(code.display_label));
      for (std::size_t e = 1; e < code.examples.size(); ++e) CHECK(code.examples[e - 1].id < code.examples[e].id);
      for (const auto& e : code.examples) CHECK(ds.contains(e.id));
    }
  }
}

TEST_CASE("codebook construction validates its invariants") {
  Code a{"x", "X", {}, {}, {Approach::Item, {}}, {}};
  Code b = a;
  CHECK_THROWS_AS(Codebook(Approach::Item, {a, b}, {}), CodebookError);
  Code bad{"y", "Z", {}, {}, {Approach::Item, {}}, {}};
  CHECK_THROWS_AS(Codebook(Approach::Item, {bad}, {}), CodebookError);
  Code dup{"w", "w", {}, {{{1, 1}, corpus::SpeakerRole::User, "a"}, {{1, 1}, corpus::SpeakerRole::User, "a"}},
           {Approach::Item, {}}, {}};
  CHECK_THROWS_AS(Codebook(Approach::Item, {dup}, {}), CodebookError);
}

TEST_CASE("table export renders examples as bullets") {
  const auto ds = testing::study_dataset();
  const auto cb = merge({{"role identification", 0, 0, {{2, 3}, {2, 4}}, {}}}, Approach::Chunk, ds);
  const auto doc = render_table_doc(cb);
  CHECK(doc.find("| role identification | ● 2-3: Designer: I'll upload one now... Are you a teacher?<br>● 2-4: "
                 "User: Yes. |") != std::string::npos);
  CHECK(doc.rfind("# Chunk-Level LLM Coding\n", 0) == 0);

  const auto empty = render_table_doc(Codebook(Approach::Topic, {}, {}));
  CHECK(empty == "# Topic Modeling + LLM\n\n| Label | Examples |\n| --- | --- |\n");
  CHECK(parse_export_format("table") == ExportFormat::TableDoc);
  CHECK(parse_export_format("structured") == ExportFormat::Structured);
  CHECK_FALSE(parse_export_format("pdf").has_value());
}

TEST_CASE("table export escapes cell separators") {
  Code c{"a b", "a|b", {}, {{{1, 0}, corpus::SpeakerRole::User, "x | y\nz"}}, {Approach::Item, {0}}, {}};
  const auto doc = render_table_doc(Codebook(Approach::Item, {c}, {}));
  CHECK(doc.find("a\\|b") != std::string::npos);
  CHECK(doc.find("x \\| y") != std::string::npos);
  CHECK(std::count(doc.begin(), doc.end(), '\n') == 5);
}

TEST_CASE("structured export round-trips random codebooks") {
  std::mt19937_64 rng(23);
  const std::vector<std::string> words = {"user", "feedback", "Bug", "share", "物理", "O'Neil", "a-b"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Code> codes;
    std::set<std::string> seen;
    const auto approach = kMachineApproaches[rng() % 4];
    const auto n = rng() % 8;
    for (std::size_t i = 0; i < n; ++i) {
      Code c;
      c.display_label = words[rng() % words.size()] + " " + words[rng() % words.size()];
      c.normalized_label = normalize_label(c.display_label);
      if (!seen.insert(c.normalized_label).second) continue;
      if (rng() % 2) c.definition = "definition " + std::to_string(rng() % 100);
      std::set<int> ids;
      for (std::size_t k = rng() % 4; k > 0; --k) ids.insert(static_cast<int>(rng() % 50));
      for (int id : ids) {
        c.examples.push_back({{2, id}, rng() % 2 ? corpus::SpeakerRole::User : corpus::SpeakerRole::Designer,
                              "content \"" + std::to_string(id) + "\"\n"});
      }
      c.provenance = {approach, {rng() % 3, 3 + rng() % 3}};
      c.flags.verb_nonconforming = rng() % 2;
      codes.push_back(std::move(c));
    }
    RunMetadata meta{"mock", rng() % 2 ? std::optional<std::uint64_t>(rng()) : std::nullopt, "abc"};
    const Codebook cb(approach, codes, meta);
    CHECK(codebook_from_json(to_json(cb)) == cb);
    CHECK(codebook_from_json(json::parse(export_codebook(cb, ExportFormat::Structured))) == cb);
  }
}

TEST_CASE("save and load through the filesystem") {
  testing::TempDir dir;
  const auto ds = testing::study_dataset();
  const auto cb = merge({{"a", 0, 0, {{2, 3}}, {}}}, Approach::Topic, ds, {"mock", 7, "d"});
  save_codebook(dir / "a.json", cb);
  CHECK(load_codebook(dir / "a.json") == cb);
  CHECK_THROWS(load_codebook(dir / "missing.json"));
  write_text_file(dir / "bad.json", "{\"format\": \"other\", \"version\": 1}");
  CHECK_THROWS(load_codebook(dir / "bad.json"));
}

TEST_CASE("bundled fixture codebooks have the overview counts") {
  const auto dir = testing::fixture_dir();
  CHECK(count_codes(load_codebook(dir / "topic.codebook.json")) == 23);
  CHECK(count_codes(load_codebook(dir / "chunk.codebook.json")) == 48);
  CHECK(count_codes(load_codebook(dir / "item.codebook.json")) == 240);
  CHECK(count_codes(load_codebook(dir / "verb.codebook.json")) == 271);
  const auto verb = load_codebook(dir / "verb.codebook.json");
  CHECK(verb.find("emoji")->flags.verb_nonconforming);
  CHECK_FALSE(verb.find("acknowledge feedback")->flags.verb_nonconforming);
  const auto chunk = load_codebook(dir / "chunk.codebook.json");
  const auto* role = chunk.find("role identification");
  REQUIRE(role != nullptr);
  CHECK(role->examples.at(0).id == MessageId{2, 3});
}
