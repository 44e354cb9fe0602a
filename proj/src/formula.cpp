#include "nsvif/formula.hpp"

#include <cctype>
#include <cstdint>
#include <sstream>
#include <vector>

#include "nsvif/error.hpp"

namespace nsvif {

namespace {

enum class Tok { id, kw_true, kw_false, bang, amp, bar, arrow, dbl_arrow, lparen, rparen, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (c >= 'a' && c <= 'z') {
      while (i < s.size() && ((s[i] >= 'a' && s[i] <= 'z') || (s[i] >= '0' && s[i] <= '9') || s[i] == '_')) ++i;
      std::string word(s.substr(start, i - start));
      if (word == "true") {
        out.push_back({Tok::kw_true, word, start});
      } else if (word == "false") {
        out.push_back({Tok::kw_false, word, start});
      } else if (word == "forall" || word == "exists") {
        throw ParseError("quantifier '" + word + "' is not supported", start);
      } else {
        out.push_back({Tok::id, word, start});
      }
      continue;
    }
    switch (c) {
      case '!': out.push_back({Tok::bang, "!", start}); ++i; continue;
      case '&': out.push_back({Tok::amp, "&", start}); ++i; continue;
      case '|': out.push_back({Tok::bar, "|", start}); ++i; continue;
      case '(': out.push_back({Tok::lparen, "(", start}); ++i; continue;
      case ')': out.push_back({Tok::rparen, ")", start}); ++i; continue;
      case '-':
        if (s.substr(i, 2) == "->") {
          out.push_back({Tok::arrow, "->", start});
          i += 2;
          continue;
        }
        break;
      case '<':
        if (s.substr(i, 3) == "<->") {
          out.push_back({Tok::dbl_arrow, "<->", start});
          i += 3;
          continue;
        }
        break;
      default:
        break;
    }
    throw ParseError("unknown token '" + std::string(1, c) + "'", start);
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula parse() {
    if (peek().kind == Tok::end) throw ParseError("empty formula", peek().pos);
    Formula f = parse_iff();
    if (peek().kind != Tok::end) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (accept(Tok::dbl_arrow)) lhs = Formula::iff(lhs, parse_implies());
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept(Tok::arrow)) return Formula::implies(lhs, parse_implies());
    return lhs;
  }

  Formula parse_or() {
    std::vector<Formula> items{parse_and()};
    while (accept(Tok::bar)) items.push_back(parse_and());
    return items.size() == 1 ? items.front() : Formula::disjunction(std::move(items));
  }

  Formula parse_and() {
    std::vector<Formula> items{parse_unary()};
    while (accept(Tok::amp)) items.push_back(parse_unary());
    return items.size() == 1 ? items.front() : Formula::conjunction(std::move(items));
  }

  Formula parse_unary() {
    if (accept(Tok::bang)) return Formula::negate(parse_unary());
    return parse_atom();
  }

  Formula parse_atom() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::id: return Formula::var(t.text);
      case Tok::kw_true: return Formula::constant(true);
      case Tok::kw_false: return Formula::constant(false);
      case Tok::lparen: {
        Formula inner = parse_iff();
        if (!accept(Tok::rparen)) throw ParseError("expected ')'", peek().pos);
        return inner;
      }
      case Tok::end: throw ParseError("unexpected end of formula", t.pos);
      default: throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

int precedence(Formula::Op op) {
  switch (op) {
    case Formula::Op::equivalence: return 1;
    case Formula::Op::implication: return 2;
    case Formula::Op::disjunction: return 3;
    case Formula::Op::conjunction: return 4;
    case Formula::Op::negation: return 5;
    default: return 6;
  }
}

void print(const Formula& f, std::ostream& os);

void print_operand(const Formula& child, Formula::Op parent, std::ostream& os) {
  int pc = precedence(child.op());
  int pp = precedence(parent);
  bool arrow_parent = parent == Formula::Op::implication || parent == Formula::Op::equivalence;
  bool wrap = pc <= pp || (arrow_parent && pc < precedence(Formula::Op::negation));
  if (parent == Formula::Op::negation) wrap = pc < pp;
  if (wrap) os << '(';
  print(child, os);
  if (wrap) os << ')';
}

void print(const Formula& f, std::ostream& os) {
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::constant: os << (f.value() ? "true" : "false"); return;
    case Op::var: os << f.id(); return;
    case Op::negation:
      os << '!';
      print_operand(f.children()[0], f.op(), os);
      return;
    default: break;
  }
  const char* sep = " & ";
  if (f.op() == Op::disjunction) sep = " | ";
  if (f.op() == Op::implication) sep = " -> ";
  if (f.op() == Op::equivalence) sep = " <-> ";
  bool first = true;
  for (const auto& c : f.children()) {
    if (!first) os << sep;
    first = false;
    print_operand(c, f.op(), os);
  }
}

bool eval(const Formula& f, const Assignment& a) {
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::constant: return f.value();
    case Op::var: {
      auto it = a.find(f.id());
      if (it == a.end()) throw EvalError("assignment has no value for '" + f.id() + "'");
      return it->second;
    }
    case Op::negation: return !eval(f.children()[0], a);
    case Op::conjunction: {
      // Evaluate every operand so a missing id is reported even after a false.
      bool all = true;
      for (const auto& c : f.children()) all = eval(c, a) && all;
      return all;
    }
    case Op::disjunction: {
      bool any = false;
      for (const auto& c : f.children()) any = eval(c, a) || any;
      return any;
    }
    case Op::implication: {
      bool lhs = eval(f.children()[0], a);
      bool rhs = eval(f.children()[1], a);
      return !lhs || rhs;
    }
    case Op::equivalence: return eval(f.children()[0], a) == eval(f.children()[1], a);
  }
  return false;
}

/// Flattened evaluator over a variable bitmask, used for enumeration.
class CompiledFormula {
 public:
  explicit CompiledFormula(const Formula& f) {
    std::size_t index = 0;
    for (const auto& v : f.variables()) slots_[v] = index++;
    width_ = index;
    emit(f);
  }

  std::size_t width() const { return width_; }

  bool eval(std::uint32_t bits) const {
    std::vector<bool> stack;
    stack.reserve(code_.size());
    for (const auto& ins : code_) {
      switch (ins.op) {
        case Formula::Op::constant: stack.push_back(ins.arg != 0); break;
        case Formula::Op::var: stack.push_back(((bits >> ins.arg) & 1U) != 0); break;
        case Formula::Op::negation: stack.back() = !stack.back(); break;
        case Formula::Op::conjunction:
        case Formula::Op::disjunction: {
          bool conj = ins.op == Formula::Op::conjunction;
          bool acc = conj;
          for (std::size_t i = 0; i < ins.arg; ++i) {
            bool v = stack.back();
            stack.pop_back();
            acc = conj ? (acc && v) : (acc || v);
          }
          stack.push_back(acc);
          break;
        }
        case Formula::Op::implication:
        case Formula::Op::equivalence: {
          bool rhs = stack.back();
          stack.pop_back();
          bool lhs = stack.back();
          stack.back() = ins.op == Formula::Op::implication ? (!lhs || rhs) : (lhs == rhs);
          break;
        }
      }
    }
    return stack.back();
  }

 private:
  struct Instruction {
    Formula::Op op;
    std::size_t arg;
  };

  void emit(const Formula& f) {
    for (const auto& c : f.children()) emit(c);
    switch (f.op()) {
      case Formula::Op::constant: code_.push_back({f.op(), f.value() ? 1U : 0U}); break;
      case Formula::Op::var: code_.push_back({f.op(), slots_.at(f.id())}); break;
      default: code_.push_back({f.op(), f.children().size()}); break;
    }
  }

  std::map<std::string, std::size_t> slots_;
  std::vector<Instruction> code_;
  std::size_t width_ = 0;
};

std::string smt_symbol(const std::string& id) {
  static const std::set<std::string> reserved = {"and", "or",  "not", "xor",   "ite", "distinct", "let",
                                                 "par", "as",  "bool", "match", "true", "false"};
  return reserved.contains(id) ? "|" + id + "|" : id;
}

void smt_term(const Formula& f, std::ostream& os) {
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::constant: os << (f.value() ? "true" : "false"); return;
    case Op::var: os << smt_symbol(f.id()); return;
    default: break;
  }
  const char* head = "and";
  if (f.op() == Op::negation) head = "not";
  if (f.op() == Op::disjunction) head = "or";
  if (f.op() == Op::implication) head = "=>";
  if (f.op() == Op::equivalence) head = "=";
  os << '(' << head;
  for (const auto& c : f.children()) {
    os << ' ';
    smt_term(c, os);
  }
  os << ')';
}

void require_total(const Formula& formula, const Assignment& assignment) {
  for (const auto& v : formula.variables()) {
    if (!assignment.contains(v)) throw EvalError("assignment has no value for '" + v + "'");
  }
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(lex(text)).parse(); }

std::string print_formula(const Formula& formula) {
  std::ostringstream os;
  print(formula, os);
  return os.str();
}

Verdict evaluate_formula(const Formula& formula, const Assignment& assignment) {
  require_total(formula, assignment);
  return eval(formula, assignment) ? Verdict::sat : Verdict::unsat;
}

Verdict strict_conjunction_verdict(const Formula& formula, const Assignment& assignment) {
  Verdict v = evaluate_formula(formula, assignment);
  for (const auto& [id, value] : assignment) {
    if (!value) return Verdict::unsat;
  }
  return v;
}

bool truth_table_satisfiable(const Formula& formula) {
  CompiledFormula compiled(formula);
  if (compiled.width() > kMaxTruthTableVariables) {
    throw ValidationError("truth table limited to " + std::to_string(kMaxTruthTableVariables) +
                          " variables, formula has " + std::to_string(compiled.width()));
  }
  const std::uint32_t rows = 1U << compiled.width();
  for (std::uint32_t bits = 0; bits < rows; ++bits) {
    if (compiled.eval(bits)) return true;
  }
  return false;
}

std::string to_smtlib_term(const Formula& formula) {
  std::ostringstream os;
  smt_term(formula, os);
  return os.str();
}

std::string emit_solver_text(const Formula& formula, const Assignment& assignment) {
  require_total(formula, assignment);
  std::set<std::string> vars = formula.variables();
  for (const auto& [id, value] : assignment) vars.insert(id);

  std::ostringstream os;
  for (const auto& v : vars) os << "(declare-const " << smt_symbol(v) << " Bool)\n";
  os << "(assert ";
  smt_term(formula, os);
  os << ")\n";
  for (const auto& [id, value] : assignment) {
    os << "(assert (= " << smt_symbol(id) << ' ' << (value ? "true" : "false") << "))\n";
  }
  os << "(check-sat)\n";
  return os.str();
}

}  // namespace nsvif
