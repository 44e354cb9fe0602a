#include "nsvif/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "nsvif/error.hpp"

namespace nsvif {

namespace {

constexpr std::array kTaxonomies = {
    Taxonomy::writing_tone,       Taxonomy::writing_topic,       Taxonomy::keyword_inclusion,
    Taxonomy::keyword_exclusion,  Taxonomy::response_title,      Taxonomy::subsection_titles,
    Taxonomy::word_count,         Taxonomy::words_per_sentence,  Taxonomy::even_odd_word_count,
    Taxonomy::response_bookend,   Taxonomy::subsection_bookend,  Taxonomy::custom,
};

template <typename T>
const T& param_as(const Params& params, const std::string& key, const char* type_name) {
  auto it = params.find(key);
  if (it == params.end()) throw ParamError("missing parameter '" + key + "'");
  const T* value = std::get_if<T>(&it->second);
  if (value == nullptr) throw ParamError("parameter '" + key + "' is not " + type_name);
  return *value;
}

}  // namespace

std::string_view to_string(ConstraintKind kind) {
  return kind == ConstraintKind::logic ? "logic" : "semantic";
}

ConstraintKind parse_constraint_kind(std::string_view text) {
  if (text == "logic") return ConstraintKind::logic;
  if (text == "semantic") return ConstraintKind::semantic;
  throw ValidationError("unknown constraint kind '" + std::string(text) + "'");
}

std::string_view to_string(Taxonomy taxonomy) {
  switch (taxonomy) {
    case Taxonomy::writing_tone: return "writing_tone";
    case Taxonomy::writing_topic: return "writing_topic";
    case Taxonomy::keyword_inclusion: return "keyword_inclusion";
    case Taxonomy::keyword_exclusion: return "keyword_exclusion";
    case Taxonomy::response_title: return "response_title";
    case Taxonomy::subsection_titles: return "subsection_titles";
    case Taxonomy::word_count: return "word_count";
    case Taxonomy::words_per_sentence: return "words_per_sentence";
    case Taxonomy::even_odd_word_count: return "even_odd_word_count";
    case Taxonomy::response_bookend: return "response_bookend";
    case Taxonomy::subsection_bookend: return "subsection_bookend";
    case Taxonomy::custom: return "custom";
  }
  return "custom";
}

std::optional<Taxonomy> parse_taxonomy(std::string_view text) {
  for (Taxonomy t : kTaxonomies) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

std::span<const Taxonomy> all_taxonomies() { return kTaxonomies; }

std::optional<ConstraintKind> taxonomy_kind(Taxonomy taxonomy) {
  switch (taxonomy) {
    case Taxonomy::writing_tone:
    case Taxonomy::writing_topic:
      return ConstraintKind::semantic;
    case Taxonomy::custom:
      return std::nullopt;
    default:
      return ConstraintKind::logic;
  }
}

std::int64_t param_int(const Params& params, const std::string& key) {
  return param_as<std::int64_t>(params, key, "an integer");
}

std::int64_t param_int(const Params& params, const std::string& key, std::int64_t fallback) {
  if (!params.contains(key)) return fallback;
  return param_int(params, key);
}

const std::string& param_string(const Params& params, const std::string& key) {
  return param_as<std::string>(params, key, "a string");
}

const std::vector<std::string>& param_list(const Params& params, const std::string& key) {
  return param_as<std::vector<std::string>>(params, key, "a list");
}

bool param_bool(const Params& params, const std::string& key, bool fallback) {
  if (!params.contains(key)) return fallback;
  return param_as<bool>(params, key, "a boolean");
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Op op = Op::constant;
  bool value = true;
  std::string id;
  std::vector<Formula> children;
};

Formula::Formula() : Formula(constant(true)) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::constant(bool value) {
  auto node = std::make_shared<Node>();
  node->op = Op::constant;
  node->value = value;
  return Formula(std::move(node));
}

Formula Formula::var(std::string id) {
  auto node = std::make_shared<Node>();
  node->op = Op::var;
  node->id = std::move(id);
  return Formula(std::move(node));
}

Formula Formula::negate(Formula child) {
  auto node = std::make_shared<Node>();
  node->op = Op::negation;
  node->children.push_back(std::move(child));
  return Formula(std::move(node));
}

Formula Formula::conjunction(std::vector<Formula> children) {
  if (children.size() < 2) throw ValidationError("And needs at least two operands");
  auto node = std::make_shared<Node>();
  node->op = Op::conjunction;
  node->children = std::move(children);
  return Formula(std::move(node));
}

Formula Formula::disjunction(std::vector<Formula> children) {
  if (children.size() < 2) throw ValidationError("Or needs at least two operands");
  auto node = std::make_shared<Node>();
  node->op = Op::disjunction;
  node->children = std::move(children);
  return Formula(std::move(node));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->op = Op::implication;
  node->children = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(node));
}

Formula Formula::iff(Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->op = Op::equivalence;
  node->children = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(node));
}

Formula Formula::all_of(const std::vector<std::string>& ids) {
  if (ids.empty()) return constant(true);
  if (ids.size() == 1) return var(ids.front());
  std::vector<Formula> vars;
  vars.reserve(ids.size());
  for (const auto& id : ids) vars.push_back(var(id));
  return conjunction(std::move(vars));
}

Formula::Op Formula::op() const { return node_->op; }
bool Formula::value() const { return node_->value; }
const std::string& Formula::id() const { return node_->id; }
std::span<const Formula> Formula::children() const { return node_->children; }

std::set<std::string> Formula::variables() const {
  std::set<std::string> out;
  std::vector<const Formula*> stack{this};
  while (!stack.empty()) {
    const Formula* f = stack.back();
    stack.pop_back();
    if (f->op() == Op::var) out.insert(f->id());
    for (const auto& c : f->children()) stack.push_back(&c);
  }
  return out;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Formula::Op::constant: return a.value() == b.value();
    case Formula::Op::var: return a.id() == b.id();
    default: break;
  }
  auto ca = a.children();
  auto cb = b.children();
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

// ---------------------------------------------------------------------------

std::string_view to_string(Verdict verdict) { return verdict == Verdict::sat ? "sat" : "unsat"; }

Verdict parse_verdict(std::string_view text) {
  if (text == "sat") return Verdict::sat;
  if (text == "unsat") return Verdict::unsat;
  throw ValidationError("verdict must be 'sat' or 'unsat', got '" + std::string(text) + "'");
}

std::string_view to_string(CheckMethod method) {
  switch (method) {
    case CheckMethod::builtin: return "builtin";
    case CheckMethod::generated_checker: return "generated_checker";
    case CheckMethod::llm_judge: return "llm_judge";
    case CheckMethod::fallback_judge: return "fallback_judge";
  }
  return "builtin";
}

CheckMethod parse_check_method(std::string_view text) {
  for (CheckMethod m : {CheckMethod::builtin, CheckMethod::generated_checker, CheckMethod::llm_judge,
                        CheckMethod::fallback_judge}) {
    if (to_string(m) == text) return m;
  }
  throw ValidationError("unknown check method '" + std::string(text) + "'");
}

bool is_valid_constraint_id(std::string_view id) {
  if (id.empty() || id.front() < 'a' || id.front() > 'z') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string normalize_constraint_id(std::string_view summary, const std::set<std::string>& taken) {
  auto head_end = summary.find_first_of(":(");
  std::string_view head = summary.substr(0, head_end);

  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (char ch : head) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (std::isspace(c) || c == '_' || c == '-' || c == '/') {
      flush();
    }
  }
  flush();

  // A summary whose head is punctuation only (": foo") falls back to the tail.
  if (words.empty() && head_end != std::string_view::npos) {
    return normalize_constraint_id(summary.substr(head_end + 1), taken);
  }
  if (words.empty()) throw ValidationError("cannot derive a constraint id from an empty summary");

  constexpr std::size_t kMaxWords = 5;
  std::string base;
  for (std::size_t i = 0; i < words.size() && i < kMaxWords; ++i) {
    if (!base.empty()) base.push_back('_');
    base += words[i];
  }
  if (base.front() < 'a' || base.front() > 'z') base.insert(0, "c_");

  if (!taken.contains(base)) return base;
  for (int suffix = 2;; ++suffix) {
    std::string candidate = base + "_" + std::to_string(suffix);
    if (!taken.contains(candidate)) return candidate;
  }
}

std::vector<std::string> validate_constraint(const Constraint& c) {
  std::vector<std::string> out;
  if (!is_valid_constraint_id(c.id)) out.push_back("constraint id '" + c.id + "' is not snake_case");
  if (auto kind = taxonomy_kind(c.taxonomy); kind && *kind != c.kind) {
    out.push_back("constraint " + c.id + " has kind " + std::string(to_string(c.kind)) +
                  " but taxonomy " + std::string(to_string(c.taxonomy)) + " is " +
                  std::string(to_string(*kind)));
  }
  auto require = [&](const std::string& key, auto check) {
    try {
      if (!check()) out.push_back("constraint " + c.id + " has an invalid '" + key + "' parameter");
    } catch (const ParamError& e) {
      out.push_back("constraint " + c.id + ": " + e.what());
    }
  };
  const auto& p = c.params;
  switch (c.taxonomy) {
    case Taxonomy::writing_tone:
      require("tone", [&] { return !param_string(p, "tone").empty(); });
      break;
    case Taxonomy::writing_topic:
      require("topic", [&] { return !param_string(p, "topic").empty(); });
      break;
    case Taxonomy::keyword_inclusion:
    case Taxonomy::keyword_exclusion:
      require("keywords", [&] { return !param_list(p, "keywords").empty(); });
      break;
    case Taxonomy::response_title:
      require("title", [&] { return !param_string(p, "title").empty(); });
      break;
    case Taxonomy::subsection_titles:
      require("titles", [&] { return !param_list(p, "titles").empty(); });
      break;
    case Taxonomy::word_count:
      require("target", [&] { return param_int(p, "target") > 0; });
      require("tolerance", [&] { return param_int(p, "tolerance", 10) >= 0; });
      break;
    case Taxonomy::words_per_sentence:
      require("max_words", [&] { return param_int(p, "max_words") > 0; });
      require("strict", [&] {
        param_bool(p, "strict", true);
        return true;
      });
      break;
    case Taxonomy::even_odd_word_count:
      require("parity", [&] {
        const auto& parity = param_string(p, "parity");
        return parity == "even" || parity == "odd";
      });
      break;
    case Taxonomy::response_bookend:
    case Taxonomy::subsection_bookend:
    case Taxonomy::custom:
      break;
  }
  return out;
}

std::vector<std::string> validate_bench_item(const BenchItem& item) {
  std::vector<std::string> out;
  if (item.label == Verdict::sat && !item.violated.empty()) out.emplace_back("sat item has violations");
  if (item.label == Verdict::unsat && item.violated.empty()) out.emplace_back("unsat item lists no violation");
  if (item.complexity < 2 || item.complexity > 10) {
    out.push_back("complexity " + std::to_string(item.complexity) + " outside 2..10");
  }
  if (static_cast<std::size_t>(item.complexity) != item.constraints.size()) {
    out.push_back("complexity " + std::to_string(item.complexity) + " does not match " +
                  std::to_string(item.constraints.size()) + " constraints");
  }

  std::set<std::string> ids;
  for (const auto& c : item.constraints) {
    if (!ids.insert(c.id).second) out.push_back("duplicate constraint id '" + c.id + "'");
    auto msgs = validate_constraint(c);
    out.insert(out.end(), msgs.begin(), msgs.end());
  }
  for (const auto& v : item.formula.variables()) {
    if (!ids.contains(v)) out.push_back("formula references unknown constraint '" + v + "'");
  }
  std::set<std::string> seen_violations;
  for (const auto& v : item.violated) {
    if (!ids.contains(v)) out.push_back("violated id '" + v + "' is not a constraint");
    if (!seen_violations.insert(v).second) out.push_back("violated id '" + v + "' listed twice");
  }
  return out;
}

}  // namespace nsvif
