#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>

#include "incode/common/json_io.h"
#include "support.h"

using namespace incode;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

// Runs the CLI with stderr folded into the captured output.
Outcome incode_cli(const std::string& args) {
  const std::string cmd = "env -u GATEWAY_URL -u GATEWAY_KEY '" + std::string(INCODE_CLI_PATH) + "' " + args + " 2>&1";
  Outcome out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (const auto n = std::fread(buf.data(), 1, buf.size(), pipe)) out.output.append(buf.data(), n);
  const int status = pclose(pipe);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

fs::path ingest_study(const testing::TempDir& dir) {
  const auto out = dir / "dataset.json";
  const auto r = incode_cli("ingest " + q(testing::source_dir() / "data" / "physics_lab.tsv") +
                            " --base-year 2017 --out " + q(out));
  INFO(r.output);
  REQUIRE(r.code == 0);
  return out;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(incode_cli("--definitely-not-a-flag").code == 2);
  CHECK(incode_cli("").code == 2);
  CHECK(incode_cli("report --format pdf").code == 2);
  CHECK(incode_cli("run --approach bert --dataset " + q(testing::source_dir() / "data" / "physics_lab.tsv")).code == 2);
  CHECK(incode_cli("--help").code == 0);
}

TEST_CASE("ingest picks up the sibling metadata file") {
  testing::TempDir dir;
  const auto ds = read_json_file(ingest_study(dir));
  CHECK(ds.dump().find("Physics Lab") != std::string::npos);
  CHECK(incode_cli("ingest " + q(testing::source_dir() / "data" / "physics_lab.tsv") + " --out " + q(dir / "x.json"))
            .code == 1);  // no base year
}

TEST_CASE("mock runs are byte-identical across invocations") {
  testing::TempDir dir;
  const auto ds = ingest_study(dir);
  for (const char* ws : {"w1", "w2"}) {
    const auto r = incode_cli("run --approach all --backend mock --seed 7 --dataset " + q(ds) + " --workspace " +
                              q(dir / ws));
    INFO(r.output);
    REQUIRE(r.code == 0);
  }
  for (const char* a : {"topic", "chunk", "item", "verb"}) {
    const auto cb = std::string("codebooks/") + a + ".codebook.json";
    const auto rs = std::string("responses/") + a + ".responses.json";
    CHECK(read_text_file(dir / "w1" / cb) == read_text_file(dir / "w2" / cb));
    CHECK(read_text_file(dir / "w1" / rs) == read_text_file(dir / "w2" / rs));
  }
  const auto other = incode_cli("run topic --backend mock --seed 8 --dataset " + q(ds) + " --workspace " + q(dir / "w3"));
  REQUIRE(other.code == 0);
  CHECK(read_text_file(dir / "w3" / "codebooks/topic.codebook.json") !=
        read_text_file(dir / "w1" / "codebooks/topic.codebook.json"));

  const auto report = incode_cli("report --workspace " + q(dir / "w1"));
  CHECK(report.code == 0);
  CHECK(report.output.rfind("DRAFT", 0) == 0);
  CHECK(incode_cli("report --final --workspace " + q(dir / "w1")).code == 1);
}

TEST_CASE("segment, run one approach, aggregate and export") {
  testing::TempDir dir;
  const auto ds = ingest_study(dir);
  REQUIRE(incode_cli("segment " + q(ds) + " --out " + q(dir / "chunks.json")).code == 0);
  const auto run = incode_cli("run chunk --backend mock --seed 1 --dataset " + q(ds) + " --chunks " +
                              q(dir / "chunks.json") + " --out " + q(dir / "chunk.responses.json"));
  INFO(run.output);
  REQUIRE(run.code == 0);
  REQUIRE(incode_cli("aggregate " + q(dir / "chunk.responses.json") + " --dataset " + q(ds) + " --out " +
                     q(dir / "chunk.codebook.json"))
              .code == 0);
  const auto table = incode_cli("export " + q(dir / "chunk.codebook.json") + " --format table");
  CHECK(table.code == 0);
  CHECK(table.output.rfind("# Chunk-Level LLM Coding", 0) == 0);
  CHECK(table.output.find("● 2-") != std::string::npos);
}

TEST_CASE("live backend without credentials is a runtime error") {
  testing::TempDir dir;
  const auto ds = ingest_study(dir);
  const auto r = incode_cli("run topic --backend live --dataset " + q(ds) + " --workspace " + q(dir / "w"));
  CHECK(r.code == 1);
  CHECK(r.output.find("GATEWAY_URL") != std::string::npos);
}

TEST_CASE("fixtures load, then report and concepts") {
  testing::TempDir dir;
  const auto load = incode_cli("fixtures load " + q(testing::fixture_dir()) + " --workspace " + q(dir.path()));
  INFO(load.output);
  REQUIRE(load.code == 0);
  CHECK(load.output.find("verb: 271 codes") != std::string::npos);
  CHECK(load.output.find("annotations loaded") != std::string::npos);

  const auto report = incode_cli("report --final --workspace " + q(dir.path()));
  CHECK(report.code == 0);
  CHECK(report.output.find("DRAFT") == std::string::npos);
  CHECK(report.output.find("7 (2.58%)") != std::string::npos);
  const auto js = incode_cli("report --format json --approach topic --workspace " + q(dir.path()));
  CHECK(json::parse(js.output).at("rows").size() == 1);

  const auto concepts = incode_cli("concepts feedback --workspace " + q(dir.path()));
  CHECK(concepts.code == 0);
  CHECK(concepts.output.find("Topic Modeling + LLM (2)") != std::string::npos);
  CHECK(concepts.output.find("4 Human Coders (13)") != std::string::npos);
}
