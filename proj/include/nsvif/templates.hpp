#pragma once

// Instruction templates for the writing benchmark: one line per constraint,
// rendered under a fixed header, plus the inverse parser used to recover
// typed constraints from rendered instruction lines.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nsvif/model.hpp"

namespace nsvif {

inline constexpr std::string_view kInstructionHeader =
    "Please write a piece of text considering all these constraints:";

/// Position of a taxonomy in a rendered instruction (topic, tone, keywords,
/// titles, word count, then the remaining structural constraints).
int render_rank(Taxonomy taxonomy);

/// Short summary whose leading words give the canonical id, e.g.
/// "Total word count: around 540 words ..." -> total_word_count.
std::string canonical_summary(Taxonomy taxonomy, const Params& params);

/// Constraint with kind, canonical summary and id (unique against `taken`).
Constraint make_constraint(Taxonomy taxonomy, Params params, const std::set<std::string>& taken = {});

/// Template line for one constraint; custom constraints render their
/// summary verbatim. Throws ParamError on missing parameters.
std::string render_constraint_line(const Constraint& constraint);

/// Header plus one line per constraint ordered by render_rank (stable).
/// Throws ParamError on an empty list.
std::string render_instruction(const std::vector<Constraint>& constraints);

/// Inverse of render_constraint_line for the non-custom templates.
std::optional<Constraint> parse_constraint_line(std::string_view line);

/// Every recognised template line of an instruction, ids deduplicated.
std::vector<Constraint> parse_instruction(std::string_view instruction);

}  // namespace nsvif
