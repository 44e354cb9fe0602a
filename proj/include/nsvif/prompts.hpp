#pragma once

// Prompt texts for the formulation and checking agents and the two-shot
// baseline judge. The texts live under prompts/ and are compiled in.

#include <map>
#include <string>
#include <string_view>

namespace nsvif::prompts {

extern const std::string_view formulation_system;
extern const std::string_view formulation_user;    // {question} {answer}
extern const std::string_view checking_system;
extern const std::string_view checking_user;       // {question} {answer} {orchestrator_planning_res} {constraint_graph_code}
extern const std::string_view baseline_judge;      // {instruction} {answer}

/// Replaces each `{name}` whose name is a key of `values`; other braces are
/// left alone. Substituted text is not rescanned.
std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& values);

}  // namespace nsvif::prompts
