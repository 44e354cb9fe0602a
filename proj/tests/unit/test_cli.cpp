#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "nsvif/cli.hpp"
#include "nsvif/error.hpp"
#include "nsvif/json_io.hpp"
#include "nsvif/templates.hpp"

using namespace nsvif;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = NSVIF_SOURCE_DIR;
const fs::path kFixtures = kSource / "tests" / "fixtures";

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("nsvif_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("verify replays the word-count example and exits 1") {
    const auto dir = scratch("verify");
    const Run r = run({"--gateway", "replay", "--cassette-dir", (kFixtures / "word_count_example" / "cassette").string(), "verify",
                       "--instruction", (kFixtures / "word_count_example" / "instruction.txt").string(), "--output",
                       (kFixtures / "word_count_example" / "output.txt").string(), "--report", (dir / "report.json").string()});
    CHECK(r.code == 1);
    const json report = json::parse(r.out);
    CHECK(report.at("overall") == "unsat");
    CHECK(report.at("violated") == json::array({"total_word_count"}));
    CHECK(read_text_file(dir / "report.json") == r.out);
    fs::remove_all(dir);
  }

  TEST_CASE("verify with given logic constraints needs no model") {
    const auto dir = scratch("given");
    const auto cs = parse_instruction(read_text_file(kFixtures / "sentence_length_example" / "instruction.txt"));
    json logic = json::array();
    for (const auto& c : cs) {
      if (c.kind == ConstraintKind::logic) logic.push_back(c);
    }
    write_text_file(dir / "constraints.json", logic.dump());
    const Run r = run({"--gateway", "replay", "verify", "--instruction",
                       (kFixtures / "sentence_length_example" / "instruction.txt").string(), "--output",
                       (kFixtures / "sentence_length_example" / "output.txt").string(), "--constraints",
                       (dir / "constraints.json").string()});
    CHECK(r.code == 1);
    const json report = json::parse(r.out);
    CHECK(report.at("violated") == json::array({"keyword_exclusion", "words_per_sentence"}));
    fs::remove_all(dir);
  }

  TEST_CASE("synth writes the full benchmark") {
    const auto dir = scratch("synth");
    const Run r = run({"synth", "--pools", (kSource / "data" / "default_pools.json").string(), "--out",
                       (dir / "bench.jsonl").string(), "--stats", (dir / "stats.json").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out == "items 820, sat 410 (50.00%), unsat 410 (50.00%)\n");
    CHECK(read_dataset(dir / "bench.jsonl").size() == 820);
    const json stats = json::parse(read_text_file(dir / "stats.json"));
    CHECK(stats.at("per_complexity").at("5") == 60);
    fs::remove_all(dir);
  }

  TEST_CASE("eval replays the end-to-end set for both verifiers") {
    const auto dir = scratch("eval");
    const std::string cassette = (kFixtures / "e2e" / "cassette").string();
    const std::string dataset = (kFixtures / "e2e" / "dataset.jsonl").string();
    const Run r = run({"--gateway", "replay", "--cassette-dir", cassette, "eval", "--dataset", dataset, "--out",
                       (dir / "metrics.json").string(), "--workers", "3"});
    REQUIRE(r.code == 0);
    const json m = json::parse(read_text_file(dir / "metrics.json"));
    CHECK(m.at("overall").at("fp") == 0);
    CHECK(m.at("overall").at("fn") == 0);
    CHECK(fs::exists(dir / "metrics.predictions.jsonl"));

    const Run b = run({"--gateway", "replay", "--cassette-dir", cassette, "eval", "--dataset", dataset, "--verifier",
                       "baseline", "--out", (dir / "baseline.json").string()});
    REQUIRE(b.code == 0);
    const json bm = json::parse(read_text_file(dir / "baseline.json"));
    CHECK(bm.at("overall").at("fp").get<int>() > 0);
    fs::remove_all(dir);
  }

  TEST_CASE("repair replays the recorded conversation") {
    const auto dir = scratch("repair");
    const Run r = run({"--gateway", "replay", "--cassette-dir", (kFixtures / "repair" / "cassette").string(), "repair",
                       "--instruction", (kFixtures / "repair" / "instruction.txt").string(), "--feedback", "boolean",
                       "--out", (dir / "t.json").string()});
    REQUIRE(r.code == 0);
    const json t = json::parse(read_text_file(dir / "t.json"));
    CHECK(t.at("outcome") == "converged");
    CHECK(t.at("iterations") == 2);
    fs::remove_all(dir);
  }

  TEST_CASE("usage errors exit 2") {
    Run r = run({"--bogus"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
    CHECK(run({}).code == 2);
    CHECK(run({"verify", "--instruction", "x"}).code == 2);
    CHECK(run({"--gateway", "sideways", "synth", "--pools", "p", "--out", "o"}).code == 2);
    r = run({"--gateway", "replay", "verify", "--instruction", "/nonexistent", "--output", "/nonexistent"});
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("replay without a cassette directory is a usage error") {
    const Run r = run({"--gateway", "replay", "verify", "--instruction",
                       (kFixtures / "sentence_length_example" / "instruction.txt").string(), "--output",
                       (kFixtures / "sentence_length_example" / "output.txt").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("cassette") != std::string::npos);
  }

  TEST_CASE("config files") {
    const auto dir = scratch("config");
    write_text_file(dir / "ok.json", R"({"model": "m2", "reflection_budget": 0, "mode": "strict", "seed": 4})");
    const Config c = load_config(dir / "ok.json");
    CHECK(c.model == "m2");
    CHECK(c.reflection_budget == 0);
    CHECK(c.mode == VerdictMode::strict);
    CHECK(c.seed == 4);
    write_text_file(dir / "unknown.json", R"({"modle": "m2"})");
    CHECK_THROWS_AS(load_config(dir / "unknown.json"), ValidationError);
    write_text_file(dir / "neg.json", R"({"repair_budget": -1})");
    CHECK_THROWS_AS(load_config(dir / "neg.json"), ValidationError);
    write_text_file(dir / "conc.json", R"({"concurrency": 0})");
    CHECK_THROWS_AS(load_config(dir / "conc.json"), ValidationError);
    write_text_file(dir / "type.json", R"({"seed": "four"})");
    CHECK_THROWS_AS(load_config(dir / "type.json"), ValidationError);
    fs::remove_all(dir);
  }
}
