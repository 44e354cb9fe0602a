#pragma once

// Shared data model: constraints, formulas, per-constraint results,
// verification reports and benchmark items.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nsvif {

enum class ConstraintKind { logic, semantic };

std::string_view to_string(ConstraintKind kind);
ConstraintKind parse_constraint_kind(std::string_view text);

/// Constraint families understood by the builtin checkers and the
/// instruction templates. `word_count` is the benchmark's "total word
/// count" constraint.
enum class Taxonomy {
  writing_tone,
  writing_topic,
  keyword_inclusion,
  keyword_exclusion,
  response_title,
  subsection_titles,
  word_count,
  words_per_sentence,
  even_odd_word_count,
  response_bookend,
  subsection_bookend,
  custom,
};

std::string_view to_string(Taxonomy taxonomy);
std::optional<Taxonomy> parse_taxonomy(std::string_view text);
std::span<const Taxonomy> all_taxonomies();

/// Kind implied by a taxonomy; nullopt for `custom`.
std::optional<ConstraintKind> taxonomy_kind(Taxonomy taxonomy);

using ParamValue = std::variant<bool, std::int64_t, std::string, std::vector<std::string>>;
using Params = std::map<std::string, ParamValue>;

struct Constraint {
  std::string id;
  ConstraintKind kind = ConstraintKind::logic;
  Taxonomy taxonomy = Taxonomy::custom;
  Params params;
  std::string summary;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Typed parameter lookup; throws ParamError when missing or mistyped.
std::int64_t param_int(const Params& params, const std::string& key);
std::int64_t param_int(const Params& params, const std::string& key, std::int64_t fallback);
const std::string& param_string(const Params& params, const std::string& key);
const std::vector<std::string>& param_list(const Params& params, const std::string& key);
bool param_bool(const Params& params, const std::string& key, bool fallback);

/// Propositional formula over constraint ids. Immutable; copies share nodes.
class Formula {
 public:
  enum class Op { constant, var, negation, conjunction, disjunction, implication, equivalence };

  Formula();  // the constant `true`

  static Formula constant(bool value);
  static Formula var(std::string id);
  static Formula negate(Formula child);
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula iff(Formula lhs, Formula rhs);

  /// `true` for no ids, a bare variable for one, otherwise an n-ary And.
  static Formula all_of(const std::vector<std::string>& ids);

  Op op() const;
  bool value() const;
  const std::string& id() const;
  std::span<const Formula> children() const;

  /// Distinct variable ids, sorted.
  std::set<std::string> variables() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

enum class Verdict { sat, unsat };

std::string_view to_string(Verdict verdict);
Verdict parse_verdict(std::string_view text);

enum class CheckMethod { builtin, generated_checker, llm_judge, fallback_judge };

std::string_view to_string(CheckMethod method);
CheckMethod parse_check_method(std::string_view text);

struct CheckResult {
  std::string constraint_id;
  bool verdict = false;
  CheckMethod method = CheckMethod::builtin;
  std::string evidence;
  int attempts = 1;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct TokenUsage {
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;

  TokenUsage& operator+=(const TokenUsage& other) {
    input_tokens += other.input_tokens;
    output_tokens += other.output_tokens;
    return *this;
  }
  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

using Assignment = std::map<std::string, bool>;

struct VerificationReport {
  Verdict overall = Verdict::sat;
  Formula formula;
  Assignment assignment;
  std::vector<CheckResult> results;
  std::vector<std::string> violated;
  std::string explanation;
  TokenUsage usage;
  /// The constraints the formula ranges over, in plan order.
  std::vector<Constraint> constraints;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

struct BenchItem {
  std::string id;
  int complexity = 0;
  std::string instruction;
  std::vector<Constraint> constraints;
  Formula formula;
  std::string output;
  Verdict label = Verdict::sat;
  std::vector<std::string> violated;

  friend bool operator==(const BenchItem&, const BenchItem&) = default;
};

bool is_valid_constraint_id(std::string_view id);

/// Lowercase snake_case id from the summary's leading words (text before
/// the first ':' or '(' , at most five words), deduplicated against `taken`
/// with a numeric suffix starting at 2. Throws ValidationError on a blank
/// summary.
std::string normalize_constraint_id(std::string_view summary, const std::set<std::string>& taken);

/// One message per broken invariant of a single constraint; empty when valid.
std::vector<std::string> validate_constraint(const Constraint& constraint);

/// One message per broken BenchItem invariant; empty when the item is valid.
std::vector<std::string> validate_bench_item(const BenchItem& item);

}  // namespace nsvif
