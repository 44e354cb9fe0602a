#pragma once

// Deterministic checkers for the logic constraints of the writing benchmark.
// Each returns a CheckResult with method=builtin and an empty constraint id;
// run_builtin() fills the id in.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nsvif/model.hpp"
#include "nsvif/text.hpp"

namespace nsvif {

enum class KeywordMode { include, exclude };
enum class Parity { even, odd };
enum class BookendScope { response, subsections };

/// Case-folded substring search over the whole text, headings included.
CheckResult check_keywords(std::string_view text, const std::vector<std::string>& keywords, KeywordMode mode);

/// Some title line (exactly one '#') equals "# " + expected after trimming.
CheckResult check_title(std::string_view text, std::string_view expected);

/// Every expected title appears as a "##..." line whose text after the
/// hashes and a single space equals it.
CheckResult check_subsection_titles(std::string_view text, const std::vector<std::string>& expected);

/// |body words - target| <= tolerance.
CheckResult check_word_count(const DocSegments& segments, std::int64_t target, std::int64_t tolerance);

CheckResult check_sentence_length(const DocSegments& segments, std::int64_t max_words, bool strict_less);

CheckResult check_parity(const DocSegments& segments, Parity parity);

/// First and last body word fold to the same text, over the whole response
/// or within every subsection. Throws ParamError for the subsection scope
/// when the document has no subsections.
CheckResult check_bookend(const DocSegments& segments, BookendScope scope);

/// True for taxonomies that have a builtin checker.
bool has_builtin_checker(Taxonomy taxonomy);

/// Dispatches a logic constraint to its checker using its params.
/// A document without subsections fails a subsection_bookend constraint
/// instead of raising. Throws ParamError for missing params or taxonomies
/// without a builtin checker.
CheckResult run_builtin(const Constraint& constraint, std::string_view text);

}  // namespace nsvif
