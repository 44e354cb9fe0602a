#include <doctest.h>

#include "nsvif/text.hpp"

using namespace nsvif;

namespace {

std::vector<std::string> texts(const std::vector<Word>& ws) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(w.text);
  return out;
}

}  // namespace

TEST_SUITE("text") {
  TEST_CASE("line classes") {
    CHECK(classify_line("# Title") == LineClass::title);
    CHECK(classify_line("  #Title") == LineClass::title);
    CHECK(classify_line("## Sub") == LineClass::subsection_title);
    CHECK(classify_line("\t#### Deep") == LineClass::subsection_title);
    CHECK(classify_line("Body # not a heading") == LineClass::body);
    CHECK(classify_line("") == LineClass::body);
  }

  TEST_CASE("line splitting") {
    CHECK(split_lines("").empty());
    CHECK(split_lines("a\n") == std::vector<std::string>{"a"});
    CHECK(split_lines("a\r\n\nb") == std::vector<std::string>{"a", "", "b"});
    CHECK(split_lines("\n") == std::vector<std::string>{""});
  }

  TEST_CASE("segments and subsections") {
    const DocSegments d = segment_document("# T\nintro\n## A\none\n\ntwo\n# U\nthree\n### B\nfour");
    REQUIRE(d.title());
    CHECK(d.title()->text == "# T");
    CHECK(d.title_lines.size() == 2);
    CHECK(d.subsection_titles.size() == 2);
    CHECK(d.body_lines.size() == 6);
    REQUIRE(d.subsections.size() == 2);
    CHECK(d.subsections[0].title_line == 3);
    CHECK(d.subsections[0].body_lines == std::vector<std::size_t>{4, 5, 6});
    CHECK(d.subsections[1].body_lines == std::vector<std::size_t>{10});
  }

  TEST_CASE("tokenizer strips punctuation at the ends only") {
    CHECK(texts(tokenize_words("Hello, world!")) == std::vector<std::string>{"Hello", "world"});
    CHECK(texts(tokenize_words("time-to-market don’t (it's)")) ==
          std::vector<std::string>{"time-to-market", "don’t", "it's"});
    CHECK(texts(tokenize_words("“Quoted” — ... ¿Qué?")) == std::vector<std::string>{"Quoted", "Qué"});
    CHECK(texts(tokenize_words("$5 + x^2 =")) == std::vector<std::string>{"$5", "+", "x^2", "="});
    CHECK(texts(tokenize_words("a b c")) == std::vector<std::string>{"a", "b", "c"});
    CHECK(tokenize_words("- * -").empty());
  }

  TEST_CASE("case folding is Unicode-aware") {
    CHECK(case_fold("AGILE") == "agile");
    CHECK(case_fold("Straße") == "strasse");
    CHECK(case_fold("ÉCOLE") == "école");
  }

  TEST_CASE("sentences cut at terminal punctuation followed by space") {
    const DocSegments d = segment_document("# T\nOne two. Three four! e.g.five\nsix?\n\nNew para here");
    const auto s = split_sentences(d);
    REQUIRE(s.size() == 4);
    CHECK(texts(s[0]) == std::vector<std::string>{"One", "two"});
    CHECK(texts(s[1]) == std::vector<std::string>{"Three", "four"});
    CHECK(texts(s[2]) == std::vector<std::string>{"e.g.five", "six"});
    CHECK(texts(s[3]) == std::vector<std::string>{"New", "para", "here"});
  }

  TEST_CASE("body word count ignores headings and bare punctuation") {
    CHECK(body_word_count(segment_document("# Title words\n- one two\n## Sub\nthree -- four")) == 4);
  }
}
