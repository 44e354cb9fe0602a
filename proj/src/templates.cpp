#include "nsvif/templates.hpp"

#include <algorithm>
#include <regex>

#include "nsvif/error.hpp"
#include "nsvif/text.hpp"

namespace nsvif {

namespace {

constexpr std::string_view kTopic = "Please write in this topic: ";
constexpr std::string_view kTone = "Please write in this tone: ";
constexpr std::string_view kInclude =
    "Include these keywords, check for string inclusion regardless of capitalization: ";
constexpr std::string_view kExclude =
    "Exclude these keywords, check for string exclusion regardless of capitalization: ";
constexpr std::string_view kTitle =
    "Include this as the title of the text, titles are lines that start with only one #: ";
constexpr std::string_view kSubsections =
    "Include these subsection titles in the text, subsection titles are lines start with more than one #: ";
constexpr std::string_view kHeadingNote =
    "this does not apply to title and subsection title lines. Title and subsection title lines start with at "
    "least one #.";
constexpr std::string_view kWordCountNote =
    "this does not apply to title and subsection title lines, which are defined as: lines that start with at "
    "least one #.";
constexpr std::string_view kSentencePrefix = "Please consider this number of words per sentence constraint: ";
constexpr std::string_view kParityPrefix = "Please consider this even/odd word count constraint: ";
constexpr std::string_view kResponseRepPrefix = "Please consider this word repetition constraint on the entire response: ";
constexpr std::string_view kSubsectionRepPrefix =
    "Please consider this word repetition constraint on subsections of the response: ";
constexpr std::string_view kResponseRepValue = "the response should start and end with the same word";
constexpr std::string_view kSubsectionRepValue = "each subsection should start and end with the same word";

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

std::string sentence_value(std::int64_t max_words, bool strict) {
  return std::string("each sentence should have ") + (strict ? "less than " : "at most ") +
         std::to_string(max_words) + " words.";
}

std::string parity_value(const std::string& parity) { return "the total word count should be " + parity + ","; }

}  // namespace

int render_rank(Taxonomy t) {
  switch (t) {
    case Taxonomy::writing_topic: return 0;
    case Taxonomy::writing_tone: return 1;
    case Taxonomy::keyword_inclusion: return 2;
    case Taxonomy::keyword_exclusion: return 3;
    case Taxonomy::response_title: return 4;
    case Taxonomy::subsection_titles: return 5;
    case Taxonomy::word_count: return 6;
    case Taxonomy::words_per_sentence: return 7;
    case Taxonomy::even_odd_word_count: return 8;
    case Taxonomy::response_bookend: return 9;
    case Taxonomy::subsection_bookend: return 10;
    case Taxonomy::custom: return 11;
  }
  return 11;
}

std::string canonical_summary(Taxonomy t, const Params& p) {
  switch (t) {
    case Taxonomy::writing_topic: return "Writing topic: " + param_string(p, "topic");
    case Taxonomy::writing_tone: return "Writing tone: " + param_string(p, "tone");
    case Taxonomy::keyword_inclusion: return "Keyword inclusion: " + join(param_list(p, "keywords"), ", ");
    case Taxonomy::keyword_exclusion: return "Keyword exclusion: " + join(param_list(p, "keywords"), ", ");
    case Taxonomy::response_title: return "Response title: " + param_string(p, "title");
    case Taxonomy::subsection_titles: return "Subsection titles: " + join(param_list(p, "titles"), ", ");
    case Taxonomy::word_count:
      return "Total word count: around " + std::to_string(param_int(p, "target")) + " words, within " +
             std::to_string(param_int(p, "tolerance", 10)) + ", excluding title lines";
    case Taxonomy::words_per_sentence:
      return "Words per sentence: " + std::string(param_bool(p, "strict", true) ? "fewer than " : "at most ") +
             std::to_string(param_int(p, "max_words")) + " words in every body sentence";
    case Taxonomy::even_odd_word_count:
      return "Even odd word count: body word count must be " + param_string(p, "parity");
    case Taxonomy::response_bookend: return "Response bookend: the body starts and ends with the same word";
    case Taxonomy::subsection_bookend:
      return "Subsection bookend: every subsection body starts and ends with the same word";
    case Taxonomy::custom: break;
  }
  throw ParamError("custom constraints have no canonical summary");
}

Constraint make_constraint(Taxonomy taxonomy, Params params, const std::set<std::string>& taken) {
  Constraint c;
  c.taxonomy = taxonomy;
  c.kind = taxonomy_kind(taxonomy).value_or(ConstraintKind::logic);
  c.params = std::move(params);
  c.summary = canonical_summary(taxonomy, c.params);
  c.id = normalize_constraint_id(c.summary, taken);
  return c;
}

std::string render_constraint_line(const Constraint& c) {
  const auto& p = c.params;
  switch (c.taxonomy) {
    case Taxonomy::writing_topic: return std::string(kTopic) + param_string(p, "topic");
    case Taxonomy::writing_tone: return std::string(kTone) + param_string(p, "tone");
    case Taxonomy::keyword_inclusion: return std::string(kInclude) + join(param_list(p, "keywords"), ",");
    case Taxonomy::keyword_exclusion: return std::string(kExclude) + join(param_list(p, "keywords"), ",");
    case Taxonomy::response_title: return std::string(kTitle) + param_string(p, "title");
    case Taxonomy::subsection_titles: return std::string(kSubsections) + join(param_list(p, "titles"), ",");
    case Taxonomy::word_count:
      return "Please consider this word count constraint: around " + std::to_string(param_int(p, "target")) +
             " words (within " + std::to_string(param_int(p, "tolerance", 10)) + " words difference is ok), " +
             std::string(kWordCountNote);
    case Taxonomy::words_per_sentence:
      return std::string(kSentencePrefix) + sentence_value(param_int(p, "max_words"), param_bool(p, "strict", true)) +
             ", " + std::string(kHeadingNote);
    case Taxonomy::even_odd_word_count:
      return std::string(kParityPrefix) + parity_value(param_string(p, "parity")) + " " + std::string(kHeadingNote);
    case Taxonomy::response_bookend:
      return std::string(kResponseRepPrefix) + std::string(kResponseRepValue) + ", " + std::string(kHeadingNote);
    case Taxonomy::subsection_bookend:
      return std::string(kSubsectionRepPrefix) + std::string(kSubsectionRepValue) + ", " + std::string(kHeadingNote);
    case Taxonomy::custom:
      if (c.summary.empty()) throw ParamError("custom constraint " + c.id + " has no summary to render");
      return c.summary;
  }
  return c.summary;
}

std::string render_instruction(const std::vector<Constraint>& constraints) {
  if (constraints.empty()) throw ParamError("cannot render an instruction without constraints");
  std::vector<const Constraint*> ordered;
  for (const auto& c : constraints) ordered.push_back(&c);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Constraint* a, const Constraint* b) { return render_rank(a->taxonomy) < render_rank(b->taxonomy); });
  std::string out(kInstructionHeader);
  for (const auto* c : ordered) {
    out.push_back('\n');
    out += render_constraint_line(*c);
  }
  return out;
}

std::optional<Constraint> parse_constraint_line(std::string_view raw) {
  const std::string_view line = trim(raw);
  auto rest = [&](std::string_view prefix) { return trim(line.substr(prefix.size())); };
  auto build = [](Taxonomy t, Params p) -> std::optional<Constraint> {
    try {
      return make_constraint(t, std::move(p));
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  if (starts_with(line, kTopic)) return build(Taxonomy::writing_topic, {{"topic", std::string(rest(kTopic))}});
  if (starts_with(line, kTone)) return build(Taxonomy::writing_tone, {{"tone", std::string(rest(kTone))}});
  if (starts_with(line, kInclude)) return build(Taxonomy::keyword_inclusion, {{"keywords", split_list(rest(kInclude))}});
  if (starts_with(line, kExclude)) return build(Taxonomy::keyword_exclusion, {{"keywords", split_list(rest(kExclude))}});
  if (starts_with(line, kTitle)) return build(Taxonomy::response_title, {{"title", std::string(rest(kTitle))}});
  if (starts_with(line, kSubsections)) {
    return build(Taxonomy::subsection_titles, {{"titles", split_list(rest(kSubsections))}});
  }

  static const std::regex word_count(
      R"(^Please consider this word count constraint: around (\d+) words \(within (\d+) words difference is ok\).*)");
  static const std::regex sentence(
      R"(^Please consider this number of words per sentence constraint: each sentence should have (less than|at most) (\d+) words.*)");
  static const std::regex parity(R"(^Please consider this even/odd word count constraint: .*\b(even|odd)\b.*)");

  std::string s(line);
  std::smatch m;
  if (std::regex_match(s, m, word_count)) {
    return build(Taxonomy::word_count,
                 {{"target", std::int64_t{std::stoll(m[1])}}, {"tolerance", std::int64_t{std::stoll(m[2])}}});
  }
  if (std::regex_match(s, m, sentence)) {
    return build(Taxonomy::words_per_sentence,
                 {{"max_words", std::int64_t{std::stoll(m[2])}}, {"strict", m[1] == "less than"}});
  }
  if (std::regex_match(s, m, parity)) return build(Taxonomy::even_odd_word_count, {{"parity", m[1].str()}});
  if (starts_with(line, kResponseRepPrefix)) return build(Taxonomy::response_bookend, {});
  if (starts_with(line, kSubsectionRepPrefix)) return build(Taxonomy::subsection_bookend, {});
  return std::nullopt;
}

std::vector<Constraint> parse_instruction(std::string_view instruction) {
  std::vector<Constraint> out;
  std::set<std::string> taken;
  for (const auto& line : split_lines(instruction)) {
    auto c = parse_constraint_line(line);
    if (!c) continue;
    c->id = normalize_constraint_id(c->summary, taken);
    taken.insert(c->id);
    out.push_back(std::move(*c));
  }
  return out;
}

}  // namespace nsvif
