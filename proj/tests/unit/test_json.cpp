#include <doctest.h>

#include <filesystem>

#include "nsvif/error.hpp"
#include "nsvif/formula.hpp"
#include "nsvif/json_io.hpp"
#include "nsvif/templates.hpp"

using namespace nsvif;

TEST_SUITE("json") {
  TEST_CASE("constraint round-trip keeps typed params") {
    const Constraint c = make_constraint(Taxonomy::words_per_sentence, {{"max_words", std::int64_t{8}}, {"strict", false}});
    const json j = c;
    CHECK(j.at("kind") == "logic");
    CHECK(j.at("taxonomy") == "words_per_sentence");
    CHECK(j.at("params").at("max_words") == 8);
    CHECK(j.get<Constraint>() == c);
  }

  TEST_CASE("report round-trip") {
    VerificationReport r;
    r.formula = parse_formula("a & (b | c)");
    r.assignment = {{"a", true}, {"b", false}, {"c", true}};
    r.results = {CheckResult{"a", true, CheckMethod::builtin, "ok", 1},
                 CheckResult{"b", false, CheckMethod::llm_judge, "judge answered NO", 2},
                 CheckResult{"c", true, CheckMethod::fallback_judge, "fallback", 4}};
    r.overall = Verdict::sat;
    r.usage = {10, 5};
    r.explanation = "fine";
    const json j = r;
    CHECK(j.at("formula") == "a & (b | c)");
    CHECK(j.at("overall") == "sat");
    CHECK(j.at("results").at(2).at("method") == "fallback_judge");
    CHECK(j.get<VerificationReport>() == r);
  }

  TEST_CASE("pretty dump sorts keys and ends with a newline") {
    const std::string s = dump_pretty(json{{"b", 1}, {"a", json{{"d", 2}, {"c", 3}}}});
    CHECK(s == "{\n  \"a\": {\n    \"c\": 3,\n    \"d\": 2\n  },\n  \"b\": 1\n}\n");
  }

  TEST_CASE("dataset JSONL round-trip") {
    BenchItem item;
    item.id = "c2_001";
    item.complexity = 2;
    item.instruction = "line one\nline two";
    item.constraints = {make_constraint(Taxonomy::writing_tone, {{"tone", std::string("calm")}}),
                        make_constraint(Taxonomy::even_odd_word_count, {{"parity", std::string("odd")}})};
    item.formula = Formula::all_of({"writing_tone", "even_odd_word_count"});
    item.output = "Ünïcode “quotes”";
    item.label = Verdict::unsat;
    item.violated = {"even_odd_word_count"};
    const auto path = std::filesystem::temp_directory_path() / "nsvif_json_test.jsonl";
    write_dataset(path, {item, item});
    const std::string text = read_text_file(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    const auto back = read_dataset(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0] == item);
    std::filesystem::remove(path);
  }

  TEST_CASE("schema problems are reported") {
    CHECK_THROWS(json{{"id", "x"}}.get<Constraint>());
    json bad = json{{"overall", "maybe"}};
    CHECK_THROWS(bad.get<VerificationReport>());
    CHECK_THROWS(read_text_file("/nonexistent/nsvif/file"));
  }
}
