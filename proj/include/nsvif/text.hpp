#pragma once

// Line segmentation and word tokenization over markdown-ish output text.
//
// Only the `#`-prefix structure matters: a line whose first non-space
// character is a single `#` is a title line, two or more `#` make a
// subsection title, everything else (blank lines included) is body.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nsvif {

struct Line {
  std::string text;
  std::size_t number = 0;  // 1-based

  friend bool operator==(const Line&, const Line&) = default;
};

struct Subsection {
  std::size_t title_line = 0;
  std::vector<std::size_t> body_lines;

  friend bool operator==(const Subsection&, const Subsection&) = default;
};

struct DocSegments {
  std::vector<Line> lines;
  std::vector<Line> title_lines;
  std::vector<Line> subsection_titles;
  std::vector<Line> body_lines;
  /// From each subsection title to the next `#`-prefixed line or the end.
  std::vector<Subsection> subsections;

  /// First title line, if any.
  std::optional<Line> title() const;
  const Line& line(std::size_t number) const { return lines.at(number - 1); }
};

struct Word {
  std::string text;    // token with surrounding punctuation removed
  std::string folded;  // Unicode default case fold of `text`

  friend bool operator==(const Word&, const Word&) = default;
};

enum class LineClass { title, subsection_title, body };

LineClass classify_line(std::string_view line);

/// Splits on '\n' (a trailing '\r' is dropped); a final newline does not
/// start an extra line and empty text has no lines.
std::vector<std::string> split_lines(std::string_view text);

DocSegments segment_document(std::string_view text);

/// Whitespace-separated tokens with Unicode punctuation stripped from both
/// ends; tokens that end up empty are dropped. Inner hyphens and
/// apostrophes are kept, so "time-to-market" is one word.
std::vector<Word> tokenize_words(std::string_view line);

/// Body paragraphs (runs of non-blank body lines) joined with spaces and cut
/// after '.', '!' or '?' followed by whitespace or the end of the
/// paragraph. Sentences without words are dropped.
std::vector<std::vector<Word>> split_sentences(const DocSegments& segments);

/// Number of words over all body lines.
std::size_t body_word_count(const DocSegments& segments);

std::string case_fold(std::string_view text);

}  // namespace nsvif
