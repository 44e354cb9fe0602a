#pragma once

// Formula DSL, evaluation, and solver-script emission.
//
// Grammar (whitespace insignificant), loosest binding first:
//
//   iff     := implies ( "<->" implies )*        left-associative
//   implies := or ( "->" implies )?              right-associative
//   or      := and ( "|" and )*
//   and     := unary ( "&" unary )*
//   unary   := "!" unary | atom
//   atom    := id | "true" | "false" | "(" iff ")"
//   id      := [a-z][a-z0-9_]*
//
// A chain `a & b & c` parses to one n-ary And; parenthesised operands keep
// their own node, so print/parse is the identity on trees.

#include <string>
#include <string_view>

#include "nsvif/model.hpp"

namespace nsvif {

/// Throws ParseError (with byte position) on empty input, unknown tokens,
/// quantifiers and malformed expressions.
Formula parse_formula(std::string_view text);

/// Canonical DSL text. Parentheses only where precedence needs them, except
/// that compound operands of -> and <-> are always wrapped.
std::string print_formula(const Formula& formula);

/// Standard boolean semantics. Throws EvalError naming the first missing id.
Verdict evaluate_formula(const Formula& formula, const Assignment& assignment);

/// Mirrors the "initialise every variable to true, then assert the measured
/// value" solver protocol: any false entry makes the assertion set
/// contradictory, so the verdict is unsat regardless of formula shape.
Verdict strict_conjunction_verdict(const Formula& formula, const Assignment& assignment);

/// Exhaustive search over all assignments of the formula's variables.
/// Throws ValidationError above `max_variables` (20).
bool truth_table_satisfiable(const Formula& formula);

inline constexpr std::size_t kMaxTruthTableVariables = 20;

/// SMT-LIB2 script whose check-sat answer equals evaluate_formula's verdict.
std::string emit_solver_text(const Formula& formula, const Assignment& assignment);

/// The formula alone as an SMT-LIB2 term, e.g. `(and c1 (not c2))`.
std::string to_smtlib_term(const Formula& formula);

}  // namespace nsvif
