#include <doctest.h>

#include "nsvif/checkers.hpp"
#include "nsvif/error.hpp"
#include "nsvif/templates.hpp"
#include "nsvif/text.hpp"

using namespace nsvif;

TEST_SUITE("checkers") {
  TEST_CASE("keywords fold case and match substrings") {
    const std::string text = "# Agile\nScrum teams use a Kanban board.";
    CHECK(check_keywords(text, {"scrum", "KANBAN"}, KeywordMode::include).verdict);
    CHECK_FALSE(check_keywords(text, {"scrum", "gantt"}, KeywordMode::include).verdict);
    CHECK(check_keywords(text, {"gantt"}, KeywordMode::exclude).verdict);
    CHECK_FALSE(check_keywords(text, {"agile"}, KeywordMode::exclude).verdict);  // headings count
    CHECK_FALSE(check_keywords("expertise", {"pert"}, KeywordMode::exclude).verdict);
    CHECK(check_keywords("STRASSE", {"straße"}, KeywordMode::include).verdict);
  }

  TEST_CASE("title") {
    CHECK(check_title("# Agile Wins\nbody", "Agile Wins").verdict);
    CHECK(check_title("  # Agile Wins  \nbody", "Agile Wins").verdict);
    CHECK_FALSE(check_title("## Agile Wins\nbody", "Agile Wins").verdict);
    CHECK_FALSE(check_title("# Agile wins", "Agile Wins").verdict);
    CHECK_FALSE(check_title("no headings", "Agile Wins").verdict);
  }

  TEST_CASE("subsection titles") {
    const std::string text = "# T\n## Intro\nx\n### Case Studies\ny";
    CHECK(check_subsection_titles(text, {"Intro", "Case Studies"}).verdict);
    const auto r = check_subsection_titles(text, {"Intro", "Outro"});
    CHECK_FALSE(r.verdict);
    CHECK(r.evidence.find("Outro") != std::string::npos);
  }

  TEST_CASE("word count with tolerance") {
    const DocSegments d = segment_document("# Title is skipped\none two three\n## Sub\nfour five -");
    CHECK(check_word_count(d, 5, 0).verdict);
    CHECK(check_word_count(d, 7, 2).verdict);
    CHECK_FALSE(check_word_count(d, 8, 2).verdict);
    CHECK(check_word_count(d, 8, 2).evidence.rfind("count=5,", 0) == 0);
  }

  TEST_CASE("sentence length, strict and inclusive") {
    const DocSegments d = segment_document("One two three. Four five.");
    CHECK(check_sentence_length(d, 4, true).verdict);
    CHECK_FALSE(check_sentence_length(d, 3, true).verdict);
    CHECK(check_sentence_length(d, 3, false).verdict);
    CHECK_FALSE(check_sentence_length(d, 2, false).verdict);
  }

  TEST_CASE("parity") {
    const DocSegments d = segment_document("# T\none two three");
    CHECK(check_parity(d, Parity::odd).verdict);
    CHECK_FALSE(check_parity(d, Parity::even).verdict);
  }

  TEST_CASE("bookends") {
    CHECK(check_bookend(segment_document("# T\nAgile is good.\nReally agile."), BookendScope::response).verdict);
    CHECK_FALSE(check_bookend(segment_document("Agile is good"), BookendScope::response).verdict);
    CHECK_FALSE(check_bookend(segment_document(""), BookendScope::response).verdict);
    const auto two = segment_document("# T\n## A\nflow then flow\n## B\nteam and Team.");
    CHECK(check_bookend(two, BookendScope::subsections).verdict);
    const auto bad = segment_document("# T\n## A\nflow then flow\n## B\nteam and data");
    CHECK_FALSE(check_bookend(bad, BookendScope::subsections).verdict);
    CHECK_THROWS_AS(check_bookend(segment_document("no subsections here"), BookendScope::subsections), ParamError);
  }

  TEST_CASE("dispatch through run_builtin") {
    const Constraint wc = make_constraint(Taxonomy::word_count, {{"target", std::int64_t{3}}, {"tolerance", std::int64_t{0}}});
    const auto r = run_builtin(wc, "a b c");
    CHECK(r.verdict);
    CHECK(r.constraint_id == "total_word_count");
    CHECK(r.method == CheckMethod::builtin);

    const Constraint sb = make_constraint(Taxonomy::subsection_bookend, {});
    CHECK_FALSE(run_builtin(sb, "no subsections").verdict);

    Constraint missing = wc;
    missing.params.clear();
    CHECK_THROWS_AS(run_builtin(missing, "a"), ParamError);
    const Constraint tone = make_constraint(Taxonomy::writing_tone, {{"tone", std::string("calm")}});
    CHECK_THROWS_AS(run_builtin(tone, "a"), ParamError);
    CHECK_FALSE(has_builtin_checker(Taxonomy::writing_tone));
    CHECK(has_builtin_checker(Taxonomy::even_odd_word_count));
  }
}
