#include "nsvif/text.hpp"

#include <cctype>

#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

namespace nsvif {

namespace {

bool is_inline_space(char c) { return c == ' ' || c == '\t'; }

struct CodePoint {
  UChar32 value;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    int32_t begin = i;
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    out.push_back({c, static_cast<std::size_t>(begin), static_cast<std::size_t>(i)});
  }
  return out;
}

bool is_space(UChar32 c) { return c >= 0 && u_isUWhiteSpace(c); }
bool is_punct(UChar32 c) { return c >= 0 && u_ispunct(c); }

}  // namespace

std::optional<Line> DocSegments::title() const {
  if (title_lines.empty()) return std::nullopt;
  return title_lines.front();
}

std::string case_fold(std::string_view text) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u.foldCase(U_FOLD_CASE_DEFAULT);
  std::string out;
  u.toUTF8String(out);
  return out;
}

LineClass classify_line(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && is_inline_space(line[i])) ++i;
  if (i >= line.size() || line[i] != '#') return LineClass::body;
  if (i + 1 < line.size() && line[i + 1] == '#') return LineClass::subsection_title;
  return LineClass::title;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    std::size_t stop = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(start, stop - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.emplace_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

DocSegments segment_document(std::string_view text) {
  DocSegments doc;
  auto raw = split_lines(text);
  doc.lines.reserve(raw.size());
  std::optional<std::size_t> open;  // index into doc.subsections
  for (std::size_t i = 0; i < raw.size(); ++i) {
    Line line{std::move(raw[i]), i + 1};
    switch (classify_line(line.text)) {
      case LineClass::title:
        doc.title_lines.push_back(line);
        open.reset();
        break;
      case LineClass::subsection_title:
        doc.subsection_titles.push_back(line);
        doc.subsections.push_back({line.number, {}});
        open = doc.subsections.size() - 1;
        break;
      case LineClass::body:
        doc.body_lines.push_back(line);
        if (open) doc.subsections[*open].body_lines.push_back(line.number);
        break;
    }
    doc.lines.push_back(std::move(line));
  }
  return doc;
}

std::vector<Word> tokenize_words(std::string_view line) {
  std::vector<Word> out;
  auto cps = decode(line);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i].value)) ++i;
    std::size_t first = i;
    while (i < cps.size() && !is_space(cps[i].value)) ++i;
    std::size_t last = i;  // one past
    while (first < last && is_punct(cps[first].value)) ++first;
    while (last > first && is_punct(cps[last - 1].value)) --last;
    if (first == last) continue;
    std::string token(line.substr(cps[first].begin, cps[last - 1].end - cps[first].begin));
    out.push_back({token, case_fold(token)});
  }
  return out;
}

std::vector<std::vector<Word>> split_sentences(const DocSegments& segments) {
  std::vector<std::string> paragraphs;
  std::string current;
  std::size_t last_body = 0;
  auto flush = [&] {
    if (!current.empty()) paragraphs.push_back(std::move(current));
    current.clear();
  };
  for (const auto& line : segments.body_lines) {
    bool blank = line.text.find_first_not_of(" \t") == std::string::npos;
    // A heading between two body lines also ends the paragraph.
    if (blank || line.number != last_body + 1) flush();
    last_body = line.number;
    if (blank) continue;
    if (!current.empty()) current.push_back(' ');
    current += line.text;
  }
  flush();

  std::vector<std::vector<Word>> sentences;
  for (const auto& para : paragraphs) {
    std::size_t start = 0;
    for (std::size_t i = 0; i < para.size(); ++i) {
      char c = para[i];
      if (c != '.' && c != '!' && c != '?') continue;
      bool at_end = i + 1 == para.size();
      if (!at_end && !std::isspace(static_cast<unsigned char>(para[i + 1]))) continue;
      auto words = tokenize_words(std::string_view(para).substr(start, i + 1 - start));
      if (!words.empty()) sentences.push_back(std::move(words));
      start = i + 1;
    }
    if (start < para.size()) {
      auto words = tokenize_words(std::string_view(para).substr(start));
      if (!words.empty()) sentences.push_back(std::move(words));
    }
  }
  return sentences;
}

std::size_t body_word_count(const DocSegments& segments) {
  std::size_t n = 0;
  for (const auto& line : segments.body_lines) n += tokenize_words(line.text).size();
  return n;
}

}  // namespace nsvif
