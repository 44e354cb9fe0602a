#include "nsvif/writer.hpp"

#include <algorithm>
#include <optional>

#include "nsvif/error.hpp"
#include "nsvif/text.hpp"

namespace nsvif {

namespace {

constexpr std::string_view kFillerPassage =
    "clear planning helps every group deliver steady value while people learn from each small result and share "
    "what works with the wider organization so that future choices rest on evidence rather than guesswork or habit "
    "good habits grow when leaders listen carefully and colleagues trust one another enough to raise concerns "
    "early honest reviews reveal gaps before they widen and simple routines keep attention on outcomes that matter "
    "to customers over many months";

const std::vector<std::string> kAnchors = {"teams", "progress", "clarity", "momentum", "learning",
                                           "focus", "results", "planning", "growth",   "value"};
const std::vector<std::string> kEnders = {"today", "together", "onward", "again", "ahead", "daily", "now"};
const std::vector<std::string> kGenericHeadings = {"Overview", "Practice", "Outlook"};

constexpr std::int64_t kDefaultWords = 120;
constexpr std::int64_t kDefaultSentenceCap = 30;

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t word_len(const std::string& phrase) { return std::max<std::size_t>(1, split_words(phrase).size()); }

bool clashes(const std::string& word, const std::vector<std::string>& excluded) {
  const std::string folded = case_fold(word);
  for (const auto& e : excluded) {
    const std::string fe = case_fold(e);
    if (fe.empty()) continue;
    if (folded.find(fe) != std::string::npos) return true;
    for (const auto& part : split_words(fe)) {
      if (folded == part) return true;
    }
  }
  return false;
}

std::vector<std::string> usable(const std::vector<std::string>& words, const std::vector<std::string>& excluded) {
  std::vector<std::string> out;
  for (const auto& w : words) {
    if (!clashes(w, excluded)) out.push_back(w);
  }
  if (out.empty()) throw ParamError("excluded keywords leave no filler vocabulary");
  return out;
}

// What the document has to look like, resolved from constraints and defaults.
struct Layout {
  std::optional<std::string> title;
  std::vector<std::string> headings;
  std::vector<std::string> keywords;
  std::vector<std::string> injected;  // forbidden words placed on purpose
  std::vector<std::string> excluded;
  std::int64_t words = kDefaultWords;
  bool fixed_words = false;
  std::int64_t max_sentence = kDefaultSentenceCap;
  std::int64_t long_sentence = 0;  // first sentence length when positive
  bool response_bookend = false;
  bool subsection_bookend = false;
  std::uint64_t variant = 0;
};

struct Unit {
  std::string text;
  std::size_t words = 1;
};

std::string render(const Layout& layout) {
  const auto filler = usable(split_words(kFillerPassage), layout.excluded);
  const auto anchors = usable(kAnchors, layout.excluded);
  const auto enders = usable(kEnders, layout.excluded);
  if (anchors.size() < 2 || enders.empty()) throw ParamError("excluded keywords leave too few anchor words");

  const std::size_t sections = std::max<std::size_t>(1, layout.headings.size());
  std::vector<std::vector<std::string>> section_keywords(sections);
  for (std::size_t k = 0; k < layout.keywords.size(); ++k) section_keywords[k % sections].push_back(layout.keywords[k]);
  for (const auto& w : layout.injected) section_keywords[0].push_back(w);

  std::vector<std::size_t> minimum(sections, 2);
  for (std::size_t s = 0; s < sections; ++s) {
    for (const auto& k : section_keywords[s]) minimum[s] += word_len(k);
  }
  if (layout.long_sentence > 0) minimum[0] += static_cast<std::size_t>(layout.long_sentence);
  std::size_t needed = 0;
  for (auto m : minimum) needed += m;

  std::int64_t total = layout.words;
  if (static_cast<std::int64_t>(needed) > total) {
    if (layout.fixed_words) throw ParamError("word target too small for the required content");
    total = static_cast<std::int64_t>(needed) + ((static_cast<std::int64_t>(needed) - total) % 2 != 0 ? 1 : 0);
  }
  std::vector<std::size_t> budget = minimum;
  const std::size_t extra = static_cast<std::size_t>(total) - needed;
  for (std::size_t s = 0; s < sections; ++s) budget[s] += extra / sections + (s < extra % sections ? 1 : 0);

  std::size_t cursor = static_cast<std::size_t>(layout.variant * 7 % filler.size());
  auto next_filler = [&] { return filler[cursor++ % filler.size()]; };

  const std::size_t base = static_cast<std::size_t>(layout.variant % anchors.size());
  std::vector<std::string> anchor(sections);
  for (std::size_t s = 0; s < sections; ++s) {
    anchor[s] = layout.response_bookend ? anchors[base] : anchors[(base + s) % anchors.size()];
  }

  std::string out;
  if (layout.title) out += "# " + *layout.title + "\n\n";
  for (std::size_t s = 0; s < sections; ++s) {
    if (!layout.headings.empty()) out += "## " + layout.headings[s] + "\n";

    std::string ender;
    if (layout.subsection_bookend) {
      ender = anchor[s];
    } else if (layout.response_bookend && s + 1 == sections) {
      ender = anchor[0];
    } else {
      for (std::size_t e = 0; e < enders.size(); ++e) {
        const auto& cand = enders[(layout.variant + s + e) % enders.size()];
        if (case_fold(cand) != case_fold(anchor[s]) && case_fold(cand) != case_fold(anchor[0])) {
          ender = cand;
          break;
        }
      }
    }

    std::vector<Unit> units;
    units.push_back({anchor[s], 1});
    std::size_t used = 2;
    if (s == 0 && layout.long_sentence > 0) {
      for (std::int64_t i = 1; i < layout.long_sentence; ++i) units.push_back({next_filler(), 1});
      used += static_cast<std::size_t>(layout.long_sentence) - 1;
    }
    for (const auto& k : section_keywords[s]) used += word_len(k);
    const std::size_t fillers = budget[s] - used;
    const auto& kws = section_keywords[s];
    const std::size_t gap = fillers / (kws.size() + 1);
    std::size_t placed = 0;
    for (std::size_t k = 0; k < kws.size(); ++k) {
      for (std::size_t i = 0; i < gap; ++i, ++placed) units.push_back({next_filler(), 1});
      units.push_back({kws[k], word_len(kws[k])});
    }
    for (; placed < fillers; ++placed) units.push_back({next_filler(), 1});
    units.push_back({ender, 1});

    std::vector<std::string> sentences;
    std::string sentence;
    std::size_t length = 0;
    const std::size_t first_cap = layout.long_sentence > 0 && s == 0 ? static_cast<std::size_t>(layout.long_sentence) : 0;
    bool first = true;
    for (const auto& u : units) {
      const std::size_t cap = first && first_cap > 0 ? first_cap : static_cast<std::size_t>(layout.max_sentence);
      if (length > 0 && length + u.words > cap) {
        sentences.push_back(sentence + ".");
        sentence.clear();
        length = 0;
        first = false;
      }
      if (sentence.empty()) {
        std::string t = u.text;
        if (!t.empty() && t[0] >= 'a' && t[0] <= 'z') t[0] = static_cast<char>(t[0] - 'a' + 'A');
        sentence = t;
      } else {
        sentence += " " + u.text;
      }
      length += u.words;
    }
    if (!sentence.empty()) sentences.push_back(sentence + ".");
    for (std::size_t i = 0; i < sentences.size(); ++i) out += (i ? " " : "") + sentences[i];
    out += "\n";
    if (s + 1 < sections) out += "\n";
  }
  return out;
}

const Constraint* find(const std::vector<Constraint>& cs, Taxonomy t) {
  for (const auto& c : cs) {
    if (c.taxonomy == t) return &c;
  }
  return nullptr;
}

bool wants_even(const Constraint& c) { return param_string(c.params, "parity") == "even"; }

Layout layout_for(const std::vector<Constraint>& shown, std::uint64_t variant) {
  Layout l;
  l.variant = variant;
  if (const auto* c = find(shown, Taxonomy::response_title)) l.title = param_string(c->params, "title");
  if (const auto* c = find(shown, Taxonomy::subsection_titles)) l.headings = param_list(c->params, "titles");
  if (const auto* c = find(shown, Taxonomy::keyword_inclusion)) l.keywords = param_list(c->params, "keywords");
  if (const auto* c = find(shown, Taxonomy::keyword_exclusion)) l.excluded = param_list(c->params, "keywords");
  l.response_bookend = find(shown, Taxonomy::response_bookend) != nullptr;
  l.subsection_bookend = find(shown, Taxonomy::subsection_bookend) != nullptr;
  if (l.subsection_bookend && l.headings.empty()) l.headings = kGenericHeadings;
  if (const auto* c = find(shown, Taxonomy::words_per_sentence)) {
    const auto limit = param_int(c->params, "max_words");
    l.max_sentence = param_bool(c->params, "strict", true) ? limit - 1 : limit;
    if (l.max_sentence < 3) throw ParamError("sentence limit too small to place keywords");
  }
  if (const auto* c = find(shown, Taxonomy::word_count)) {
    l.words = param_int(c->params, "target");
    l.fixed_words = true;
  } else {
    l.words = kDefaultWords + static_cast<std::int64_t>(variant % 5);
  }
  return l;
}

void apply_parity(Layout& l, const std::vector<Constraint>& shown, bool flip) {
  const auto* c = find(shown, Taxonomy::even_odd_word_count);
  if (!c) return;
  const bool even = wants_even(*c) != flip;
  if ((l.words % 2 == 0) != even) l.words += 1;
}

}  // namespace

std::string compose_compliant_text(const std::vector<Constraint>& constraints, std::uint64_t variant) {
  Layout l = layout_for(constraints, variant);
  apply_parity(l, constraints, false);
  return render(l);
}

std::string TemplateWriter::generate(const GenerationRequest& request) {
  const std::uint64_t variant = request.seed * 31 + static_cast<std::uint64_t>(request.attempt);
  Layout l = layout_for(request.shown_constraints, variant);
  if (options_.violate_omitted && request.omitted) {
    const Constraint& o = *request.omitted;
    switch (o.taxonomy) {
      case Taxonomy::keyword_exclusion:
        l.injected.push_back(param_list(o.params, "keywords").front());
        break;
      case Taxonomy::word_count:
        l.words = param_int(o.params, "target") + param_int(o.params, "tolerance", 10) + 5;
        l.fixed_words = true;
        break;
      case Taxonomy::words_per_sentence: {
        const auto limit = param_int(o.params, "max_words");
        l.long_sentence = param_bool(o.params, "strict", true) ? limit : limit + 1;
        l.max_sentence = std::max(l.max_sentence, l.long_sentence);
        break;
      }
      case Taxonomy::even_odd_word_count:
        l.words = l.words + ((l.words % 2 == 0) == wants_even(o) ? 1 : 0);
        break;
      default:
        // Title, subsections, inclusion and both bookends already fail when
        // the writer is not told about them.
        break;
    }
  }
  apply_parity(l, request.shown_constraints, false);
  return render(l);
}

}  // namespace nsvif
