#pragma once

// The verifier: a formulation agent extracts constraints and a formula, a
// checking agent produces and runs one checker per constraint, and the solver
// composes the results into a report. Also hosts the two-shot baseline judge.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nsvif/gateway.hpp"
#include "nsvif/model.hpp"
#include "nsvif/runner.hpp"

namespace nsvif {

enum class VerdictMode { standard, strict };
std::string_view to_string(VerdictMode mode);
VerdictMode parse_verdict_mode(std::string_view text);

struct PlanModule {
  std::string module_type;  // "symbolic" or "neural"
  std::string purpose;
  std::string constraints_addressed;
  std::string module_specification;
  std::string input_output;
};

struct FormulationPlan {
  std::vector<Constraint> constraints;
  Formula formula;
  /// Parallel to `constraints`; empty for pre-declared plans.
  std::vector<PlanModule> raw_workflow;
};

struct BuiltinRoute {};
struct GeneratedRoute {
  std::string program;
};
struct JudgeRoute {
  std::string prompt;
};
using CheckerRoute = std::variant<BuiltinRoute, GeneratedRoute, JudgeRoute>;

struct CheckerSpec {
  std::string constraint_id;
  CheckerRoute route;
  int reflection_budget = 3;
  Constraint constraint;
  std::optional<PlanModule> module;
  /// Set when producing the route already failed once; run_checker counts it
  /// as the first attempt.
  std::string build_error;
  /// Disagreement between the plan's module type and the matched template.
  std::string note;
};

struct PipelineConfig {
  std::string model = "gpt-4.1";
  double temperature = kDefaultTemperature;
  int reflection_budget = 3;
  int parse_retries = 2;
};

class Verifier {
 public:
  /// `runner` may be null; generated checkers then fail and fall back.
  Verifier(std::shared_ptr<Gateway> gateway, PipelineConfig config, std::shared_ptr<ProgramRunner> runner = nullptr);

  FormulationPlan formulate(const std::string& instruction, const std::string& output);
  FormulationPlan formulate(const std::string& instruction, const std::string& output, TokenUsage& usage);

  /// Plan for constraints that are already known; no LLM call.
  static FormulationPlan plan_from_constraints(std::vector<Constraint> constraints,
                                               std::optional<Formula> formula = std::nullopt);

  CheckerSpec build_checker(const FormulationPlan& plan, std::size_t index, const std::string& instruction,
                            const std::string& output, TokenUsage& usage);
  CheckResult run_checker(const CheckerSpec& spec, const std::string& instruction, const std::string& output,
                          const FormulationPlan& plan, TokenUsage& usage);

  static VerificationReport solve(const FormulationPlan& plan, const std::vector<CheckResult>& results,
                                  VerdictMode mode, TokenUsage usage = {});

  VerificationReport verify(const std::string& instruction, const std::string& output, VerdictMode mode);
  VerificationReport verify_plan(const FormulationPlan& plan, const std::string& instruction,
                                 const std::string& output, VerdictMode mode, TokenUsage usage = {});

  Verdict baseline_judge(const std::string& instruction, const std::string& output);
  Verdict baseline_judge(const std::string& instruction, const std::string& output, TokenUsage& usage);

  const PipelineConfig& config() const { return config_; }

 private:
  ChatResponse ask(const std::string& system, const std::string& user, TokenUsage& usage);

  std::shared_ptr<Gateway> gateway_;
  PipelineConfig config_;
  std::shared_ptr<ProgramRunner> runner_;
};

/// JSON object text embedded in an LLM reply: the span
/// from the first '{' to the last '}'. Throws ParseError when there is none.
std::string extract_json_object(std::string_view reply);

/// Body of the triple-quoted `prompt = """..."""` definition, if any.
std::optional<std::string> extract_prompt_variable(std::string_view code);

/// YES/NO reading of a judge reply: the first alphabetic token, case-folded.
std::optional<bool> parse_judge_reply(std::string_view reply);

/// Taxonomy suggested by a plan module's wording, before parameter lookup.
Taxonomy guess_taxonomy(const PlanModule& module);

}  // namespace nsvif
