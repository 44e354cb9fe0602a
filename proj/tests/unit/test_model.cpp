#include <doctest.h>

#include "nsvif/error.hpp"
#include "nsvif/model.hpp"

using namespace nsvif;

TEST_SUITE("model") {
  TEST_CASE("constraint ids come from the summary head") {
    CHECK(normalize_constraint_id("Total word count: around 540 words", {}) == "total_word_count");
    CHECK(normalize_constraint_id("Words per sentence (strict): fewer than 8", {}) == "words_per_sentence");
    CHECK(normalize_constraint_id("One two three four five six seven", {}) == "one_two_three_four_five");
    CHECK(normalize_constraint_id("Writing tone: calm", {"writing_tone"}) == "writing_tone_2");
    CHECK(normalize_constraint_id("Writing tone: calm", {"writing_tone", "writing_tone_2"}) == "writing_tone_3");
    CHECK_THROWS_AS(normalize_constraint_id("   ", {}), ValidationError);
  }

  TEST_CASE("id validity") {
    CHECK(is_valid_constraint_id("c1"));
    CHECK(is_valid_constraint_id("total_word_count"));
    CHECK_FALSE(is_valid_constraint_id(""));
    CHECK_FALSE(is_valid_constraint_id("Total"));
    CHECK_FALSE(is_valid_constraint_id("1abc"));
    CHECK_FALSE(is_valid_constraint_id("a-b"));
  }

  TEST_CASE("taxonomy names round-trip and imply a kind") {
    for (Taxonomy t : all_taxonomies()) CHECK(parse_taxonomy(to_string(t)) == t);
    CHECK_FALSE(parse_taxonomy("nonsense").has_value());
    CHECK(taxonomy_kind(Taxonomy::writing_tone) == ConstraintKind::semantic);
    CHECK(taxonomy_kind(Taxonomy::word_count) == ConstraintKind::logic);
    CHECK_FALSE(taxonomy_kind(Taxonomy::custom).has_value());
  }

  TEST_CASE("typed params") {
    Params p{{"n", std::int64_t{3}}, {"s", std::string("x")}, {"l", std::vector<std::string>{"a"}}, {"b", true}};
    CHECK(param_int(p, "n") == 3);
    CHECK(param_int(p, "missing", 7) == 7);
    CHECK(param_string(p, "s") == "x");
    CHECK(param_list(p, "l").size() == 1);
    CHECK(param_bool(p, "b", false));
    CHECK_THROWS_AS(param_int(p, "s"), ParamError);
    CHECK_THROWS_AS(param_string(p, "missing"), ParamError);
  }

  TEST_CASE("constraint validation") {
    Constraint c;
    c.id = "writing_tone";
    c.kind = ConstraintKind::semantic;
    c.taxonomy = Taxonomy::writing_tone;
    c.summary = "Writing tone: calm";
    c.params = {{"tone", std::string("calm")}};
    CHECK(validate_constraint(c).empty());
    c.kind = ConstraintKind::logic;
    CHECK_FALSE(validate_constraint(c).empty());
    c.kind = ConstraintKind::semantic;
    c.id = "Bad Id";
    CHECK_FALSE(validate_constraint(c).empty());
  }

  TEST_CASE("formula construction") {
    CHECK(Formula() == Formula::constant(true));
    CHECK(Formula::all_of({}) == Formula::constant(true));
    CHECK(Formula::all_of({"a"}) == Formula::var("a"));
    const Formula f = Formula::all_of({"b", "a", "b"});
    CHECK(f.op() == Formula::Op::conjunction);
    CHECK(f.children().size() == 3);
    CHECK(f.variables() == std::set<std::string>{"a", "b"});
    CHECK_FALSE(Formula::var("a") == Formula::var("b"));
  }

  TEST_CASE("bench item validation") {
    BenchItem item;
    item.id = "c2_001";
    item.complexity = 2;
    item.instruction = "x";
    item.output = "y";
    Constraint a, b;
    a.id = "a";
    a.summary = "A";
    b.id = "b";
    b.summary = "B";
    item.constraints = {a, b};
    item.formula = Formula::var("a");
    CHECK(validate_bench_item(item).empty());
    item.complexity = 3;
    CHECK_FALSE(validate_bench_item(item).empty());
    item.complexity = 2;
    item.formula = Formula::var("zzz");
    CHECK_FALSE(validate_bench_item(item).empty());
    item.formula = Formula::var("a");
    item.label = Verdict::unsat;
    CHECK_FALSE(validate_bench_item(item).empty());  // unsat needs a violated id
    item.violated = {"a"};
    CHECK(validate_bench_item(item).empty());
  }
}
