#include "nsvif/checkers.hpp"

#include <cstdlib>
#include <sstream>

#include "nsvif/error.hpp"

namespace nsvif {

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

CheckResult result(bool verdict, std::string evidence) {
  CheckResult r;
  r.verdict = verdict;
  r.method = CheckMethod::builtin;
  r.evidence = std::move(evidence);
  r.attempts = 1;
  return r;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string excerpt(const std::vector<Word>& words, std::size_t max_words = 12) {
  std::string out;
  for (std::size_t i = 0; i < words.size() && i < max_words; ++i) {
    if (i) out.push_back(' ');
    out += words[i].text;
  }
  if (words.size() > max_words) out += " ...";
  return out;
}

}  // namespace

CheckResult check_keywords(std::string_view text, const std::vector<std::string>& keywords, KeywordMode mode) {
  if (keywords.empty()) throw ParamError("keyword list is empty");
  const std::string haystack = case_fold(text);
  std::vector<std::string> hits;
  std::vector<std::string> misses;
  for (const auto& kw : keywords) {
    if (trim(kw).empty()) throw ParamError("keyword list contains an empty keyword");
    if (haystack.find(case_fold(kw)) != std::string::npos) {
      hits.push_back(kw);
    } else {
      misses.push_back(kw);
    }
  }
  if (mode == KeywordMode::include) {
    if (misses.empty()) return result(true, "all " + std::to_string(keywords.size()) + " keywords present");
    return result(false, "missing keywords: " + join(misses, ", "));
  }
  if (hits.empty()) return result(true, "none of " + std::to_string(keywords.size()) + " forbidden keywords present");
  return result(false, "forbidden keywords present: " + join(hits, ", "));
}

CheckResult check_title(std::string_view text, std::string_view expected) {
  if (trim(expected).empty()) throw ParamError("expected title is empty");
  const std::string wanted = "# " + std::string(trim(expected));
  auto doc = segment_document(text);
  for (const auto& line : doc.title_lines) {
    if (trim(line.text) == wanted) return result(true, "title found on line " + std::to_string(line.number));
  }
  if (doc.title_lines.empty()) return result(false, "no title line (a line starting with exactly one #)");
  return result(false, "no title line equals \"" + wanted + "\"; first title line is \"" +
                           std::string(trim(doc.title_lines.front().text)) + "\"");
}

CheckResult check_subsection_titles(std::string_view text, const std::vector<std::string>& expected) {
  if (expected.empty()) throw ParamError("expected subsection title list is empty");
  auto doc = segment_document(text);
  std::vector<std::string> present;
  for (const auto& line : doc.subsection_titles) {
    std::string_view t = trim(line.text);
    auto after = t.find_first_not_of('#');
    if (after == std::string_view::npos || t[after] != ' ') continue;
    present.emplace_back(t.substr(after + 1));
  }
  std::vector<std::string> missing;
  for (const auto& want : expected) {
    std::string_view w = trim(want);
    bool found = false;
    for (const auto& p : present) found = found || p == w;
    if (!found) missing.emplace_back(w);
  }
  if (missing.empty()) return result(true, "all " + std::to_string(expected.size()) + " subsection titles present");
  return result(false, "missing subsection titles: " + join(missing, ", "));
}

CheckResult check_word_count(const DocSegments& segments, std::int64_t target, std::int64_t tolerance) {
  if (target <= 0) throw ParamError("word count target must be positive");
  if (tolerance < 0) throw ParamError("word count tolerance must be non-negative");
  const auto count = static_cast<std::int64_t>(body_word_count(segments));
  const bool ok = std::llabs(count - target) <= tolerance;
  return result(ok, "count=" + std::to_string(count) + ", target=" + std::to_string(target) +
                        ", tolerance=" + std::to_string(tolerance));
}

CheckResult check_sentence_length(const DocSegments& segments, std::int64_t max_words, bool strict_less) {
  if (max_words <= 0) throw ParamError("max words per sentence must be positive");
  auto sentences = split_sentences(segments);
  std::size_t longest = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto n = static_cast<std::int64_t>(sentences[i].size());
    longest = std::max(longest, sentences[i].size());
    const bool ok = strict_less ? n < max_words : n <= max_words;
    if (!ok) {
      std::ostringstream os;
      os << "sentence " << (i + 1) << " has " << n << " words (limit: " << (strict_less ? "fewer than " : "at most ")
         << max_words << "): \"" << excerpt(sentences[i]) << "\"";
      return result(false, os.str());
    }
  }
  return result(true, std::to_string(sentences.size()) + " sentences, longest has " + std::to_string(longest) +
                          " words");
}

CheckResult check_parity(const DocSegments& segments, Parity parity) {
  const std::size_t count = body_word_count(segments);
  const bool even = count % 2 == 0;
  const bool ok = parity == Parity::even ? even : !even;
  return result(ok, "count=" + std::to_string(count) + " (" + (even ? "even" : "odd") + "), required " +
                        (parity == Parity::even ? "even" : "odd"));
}

CheckResult check_bookend(const DocSegments& segments, BookendScope scope) {
  auto span_check = [&](const std::vector<std::size_t>& line_numbers, const std::string& name,
                        std::string& why) -> bool {
    std::vector<Word> words;
    for (auto n : line_numbers) {
      auto w = tokenize_words(segments.line(n).text);
      words.insert(words.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
    }
    if (words.empty()) {
      why = name + " has no body words";
      return false;
    }
    const auto& first = words.front();
    const auto& last = words.back();
    why = name + " starts with \"" + first.text + "\" and ends with \"" + last.text + "\"";
    return first.folded == last.folded;
  };

  if (scope == BookendScope::response) {
    std::vector<std::size_t> numbers;
    for (const auto& line : segments.body_lines) numbers.push_back(line.number);
    std::string why;
    bool ok = span_check(numbers, "response", why);
    return result(ok, why);
  }

  if (segments.subsections.empty()) throw ParamError("document has no subsections");
  for (const auto& sub : segments.subsections) {
    std::string why;
    std::string name = "subsection \"" + std::string(trim(segments.line(sub.title_line).text)) + "\"";
    if (!span_check(sub.body_lines, name, why)) return result(false, why);
  }
  return result(true, "all " + std::to_string(segments.subsections.size()) +
                          " subsections start and end with the same word");
}

bool has_builtin_checker(Taxonomy taxonomy) {
  return taxonomy_kind(taxonomy) == ConstraintKind::logic;
}

CheckResult run_builtin(const Constraint& c, std::string_view text) {
  const auto& p = c.params;
  CheckResult r;
  switch (c.taxonomy) {
    case Taxonomy::keyword_inclusion:
      r = check_keywords(text, param_list(p, "keywords"), KeywordMode::include);
      break;
    case Taxonomy::keyword_exclusion:
      r = check_keywords(text, param_list(p, "keywords"), KeywordMode::exclude);
      break;
    case Taxonomy::response_title:
      r = check_title(text, param_string(p, "title"));
      break;
    case Taxonomy::subsection_titles:
      r = check_subsection_titles(text, param_list(p, "titles"));
      break;
    case Taxonomy::word_count:
      r = check_word_count(segment_document(text), param_int(p, "target"), param_int(p, "tolerance", 10));
      break;
    case Taxonomy::words_per_sentence:
      r = check_sentence_length(segment_document(text), param_int(p, "max_words"), param_bool(p, "strict", true));
      break;
    case Taxonomy::even_odd_word_count: {
      const auto& parity = param_string(p, "parity");
      if (parity != "even" && parity != "odd") throw ParamError("parity must be 'even' or 'odd'");
      r = check_parity(segment_document(text), parity == "even" ? Parity::even : Parity::odd);
      break;
    }
    case Taxonomy::response_bookend:
      r = check_bookend(segment_document(text), BookendScope::response);
      break;
    case Taxonomy::subsection_bookend: {
      auto doc = segment_document(text);
      r = doc.subsections.empty() ? result(false, "response has no subsections")
                                  : check_bookend(doc, BookendScope::subsections);
      break;
    }
    default:
      throw ParamError("taxonomy " + std::string(to_string(c.taxonomy)) + " has no builtin checker");
  }
  r.constraint_id = c.id;
  return r;
}

}  // namespace nsvif
