#include "nsvif/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>

#include "nsvif/checkers.hpp"
#include "nsvif/error.hpp"
#include "nsvif/formula.hpp"
#include "nsvif/json_io.hpp"
#include "nsvif/prompts.hpp"
#include "nsvif/templates.hpp"
#include "nsvif/text.hpp"

namespace nsvif {

namespace {

// A checker attempt that failed in a way the reflection loop may repair.
class AttemptFailure : public Error {
 public:
  using Error::Error;
};

constexpr std::string_view kFallbackJudge =
    "Question:\n{question}\n\nAnswer:\n{answer}\n\nConstraint:\n{constraint}\n\n"
    "Does the answer satisfy the constraint? Reply with YES or NO only.";

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim_copy(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool has(const std::string& text, std::string_view needle) { return text.find(needle) != std::string::npos; }

bool has_word(const std::string& text, std::string_view word) {
  std::size_t pos = 0;
  while ((pos = text.find(word, pos)) != std::string::npos) {
    bool left = pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
    std::size_t end = pos + word.size();
    bool right = end >= text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
    if (left && right) return true;
    pos = end;
  }
  return false;
}

Taxonomy taxonomy_from_cues(const std::string& t) {
  const bool bookend = has(t, "same word") || has(t, "start and end") || has(t, "begin and end") ||
                       has(t, "bookend") || has(t, "repetition");
  if (bookend) return has(t, "subsection") ? Taxonomy::subsection_bookend : Taxonomy::response_bookend;
  if (has(t, "sentence")) return Taxonomy::words_per_sentence;
  if (has(t, "parity") || has(t, "even/odd") || has_word(t, "odd")) return Taxonomy::even_odd_word_count;
  if (has(t, "word count") || has(t, "number of words") || has(t, "total word")) return Taxonomy::word_count;
  if (has(t, "keyword")) {
    if (has(t, "exclu") || has(t, "forbid") || has(t, "must not") || has(t, "avoid") || has(t, "absent")) {
      return Taxonomy::keyword_exclusion;
    }
    return Taxonomy::keyword_inclusion;
  }
  if (has(t, "title") || has(t, "heading")) {
    return has(t, "subsection") ? Taxonomy::subsection_titles : Taxonomy::response_title;
  }
  if (has_word(t, "tone")) return Taxonomy::writing_tone;
  if (has_word(t, "topic")) return Taxonomy::writing_topic;
  return Taxonomy::custom;
}

std::string json_text_field(const json& module, const char* key) {
  if (!module.contains(key)) return {};
  const json& v = module.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (!out.empty()) out += "; ";
      out += item.is_string() ? item.get<std::string>() : item.dump();
    }
    return out;
  }
  if (v.is_null()) return {};
  return v.dump();
}

ConstraintKind kind_from_module_type(std::string_view module_type) {
  return lower(trim_copy(module_type)) == "symbolic" ? ConstraintKind::logic : ConstraintKind::semantic;
}

// Parameters for a taxonomy, looked up first among the instruction's template
// lines (each used once) and then in the module's own wording.
std::optional<Params> find_params(Taxonomy taxonomy, const PlanModule& module, std::vector<Constraint>& candidates) {
  for (auto it = candidates.begin(); it != candidates.end(); ++it) {
    if (it->taxonomy == taxonomy) {
      Params p = it->params;
      candidates.erase(it);
      return p;
    }
  }
  for (const auto* field : {&module.module_specification, &module.constraints_addressed, &module.purpose}) {
    for (const auto& line : split_lines(*field)) {
      if (auto c = parse_constraint_line(line); c && c->taxonomy == taxonomy) return c->params;
    }
  }
  return std::nullopt;
}

Formula substitute_aliases(const Formula& f, const std::map<std::string, std::string>& alias) {
  switch (f.op()) {
    case Formula::Op::constant: return f;
    case Formula::Op::var: {
      auto it = alias.find(f.id());
      if (it == alias.end()) throw FormulationError("formula refers to unknown constraint '" + f.id() + "'");
      return Formula::var(it->second);
    }
    case Formula::Op::negation: return Formula::negate(substitute_aliases(f.children()[0], alias));
    default: break;
  }
  std::vector<Formula> kids;
  for (const auto& c : f.children()) kids.push_back(substitute_aliases(c, alias));
  switch (f.op()) {
    case Formula::Op::conjunction: return Formula::conjunction(std::move(kids));
    case Formula::Op::disjunction: return Formula::disjunction(std::move(kids));
    case Formula::Op::implication: return Formula::implies(kids[0], kids[1]);
    default: return Formula::iff(kids[0], kids[1]);
  }
}

std::string excerpt(std::string_view text, std::size_t limit = 200) {
  std::string t = trim_copy(text);
  if (t.size() > limit) t = t.substr(0, limit) + "...";
  return t;
}

json module_to_json(const PlanModule& m) {
  return json{{"module_type", m.module_type},
              {"purpose", m.purpose},
              {"constraints_addressed", m.constraints_addressed},
              {"module_specification", m.module_specification},
              {"input_output", m.input_output}};
}

PlanModule module_for_constraint(const Constraint& c) {
  PlanModule m;
  m.module_type = c.kind == ConstraintKind::logic ? "symbolic" : "neural";
  m.purpose = "Verify: " + c.summary;
  m.constraints_addressed = c.summary;
  m.module_specification = c.kind == ConstraintKind::logic
                               ? "The module should generate a python program that statically checks: " + c.summary
                               : "The module should generate a prompt that asks an LLM whether the answer satisfies: " +
                                     c.summary;
  m.input_output = "Input: the answer; Output: sat or unsat.";
  return m;
}

}  // namespace

std::string_view to_string(VerdictMode mode) { return mode == VerdictMode::strict ? "strict" : "standard"; }

VerdictMode parse_verdict_mode(std::string_view text) {
  if (text == "standard") return VerdictMode::standard;
  if (text == "strict") return VerdictMode::strict;
  throw ValidationError("unknown verdict mode '" + std::string(text) + "' (expected standard or strict)");
}

std::string extract_json_object(std::string_view reply) {
  auto open = reply.find('{');
  auto close = reply.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw ParseError("no JSON object in reply", open == std::string_view::npos ? 0 : open);
  }
  return std::string(reply.substr(open, close - open + 1));
}

std::optional<std::string> extract_prompt_variable(std::string_view code) {
  std::size_t pos = 0;
  while ((pos = code.find("prompt", pos)) != std::string_view::npos) {
    const std::size_t name_end = pos + 6;
    const bool left_ok = pos == 0 || !(std::isalnum(static_cast<unsigned char>(code[pos - 1])) || code[pos - 1] == '_');
    pos = name_end;
    if (!left_ok) continue;
    std::size_t i = name_end;
    while (i < code.size() && (code[i] == ' ' || code[i] == '\t')) ++i;
    if (i >= code.size() || code[i] != '=' || (i + 1 < code.size() && code[i + 1] == '=')) continue;
    ++i;
    while (i < code.size() && (code[i] == ' ' || code[i] == '\t')) ++i;
    for (int k = 0; k < 2 && i < code.size() && std::strchr("rRfFuU", code[i]) && code[i] != '\0'; ++k) ++i;
    if (i >= code.size() || (code[i] != '"' && code[i] != '\'')) continue;

    const char q = code[i];
    const bool triple = code.substr(i, 3) == std::string(3, q);
    std::string_view closer = triple ? code.substr(i, 3) : code.substr(i, 1);
    const std::size_t body_start = i + closer.size();
    std::size_t close = body_start;
    while (true) {
      close = code.find(closer, close);
      if (close == std::string_view::npos) break;
      if (close > body_start && code[close - 1] == '\\') {
        ++close;
        continue;
      }
      break;
    }
    if (close == std::string_view::npos) continue;
    std::string_view body = code.substr(body_start, close - body_start);
    if (!triple && body.find('\n') != std::string_view::npos) continue;
    std::string trimmed = trim_copy(body);
    if (!trimmed.empty()) return trimmed;
  }
  return std::nullopt;
}

std::optional<bool> parse_judge_reply(std::string_view reply) {
  std::size_t i = 0;
  while (i < reply.size() && !std::isalpha(static_cast<unsigned char>(reply[i]))) ++i;
  std::size_t j = i;
  while (j < reply.size() && std::isalpha(static_cast<unsigned char>(reply[j]))) ++j;
  const std::string token = lower(reply.substr(i, j - i));
  if (token == "yes") return true;
  if (token == "no") return false;
  return std::nullopt;
}

Taxonomy guess_taxonomy(const PlanModule& module) {
  // A labelled summary ("Writing topic: ...") names its type before the colon.
  if (auto colon = module.constraints_addressed.find(':'); colon != std::string::npos) {
    const Taxonomy head = taxonomy_from_cues(lower(module.constraints_addressed.substr(0, colon)));
    if (head != Taxonomy::custom) return head;
  }
  Taxonomy t = taxonomy_from_cues(lower(module.constraints_addressed));
  if (t != Taxonomy::custom) return t;
  return taxonomy_from_cues(lower(module.purpose + " " + module.module_specification));
}

// ---------------------------------------------------------------------------

Verifier::Verifier(std::shared_ptr<Gateway> gateway, PipelineConfig config, std::shared_ptr<ProgramRunner> runner)
    : gateway_(std::move(gateway)), config_(std::move(config)), runner_(std::move(runner)) {
  if (config_.reflection_budget < 0 || config_.parse_retries < 0) throw ValidationError("budgets must be >= 0");
}

ChatResponse Verifier::ask(const std::string& system, const std::string& user, TokenUsage& usage) {
  if (!gateway_) throw Error("verifier has no gateway configured");
  ChatRequest request;
  request.model = config_.model;
  request.system = system;
  request.user = user;
  request.temperature = config_.temperature;
  ChatResponse response = gateway_->complete(request);
  usage += response.usage;
  return response;
}

FormulationPlan Verifier::formulate(const std::string& instruction, const std::string& output) {
  TokenUsage usage;
  return formulate(instruction, output, usage);
}

FormulationPlan Verifier::formulate(const std::string& instruction, const std::string& output, TokenUsage& usage) {
  if (trim_copy(instruction).empty()) throw ValidationError("instruction is empty");
  const std::string base_user =
      prompts::fill(prompts::formulation_user, {{"question", instruction}, {"answer", output}});

  json reply;
  std::string user = base_user;
  for (int attempt = 0;; ++attempt) {
    const ChatResponse r = ask(std::string(prompts::formulation_system), user, usage);
    try {
      reply = json::parse(extract_json_object(r.text));
      if (!reply.is_object()) throw ParseError("reply is not a JSON object", 0);
      break;
    } catch (const std::exception& e) {
      if (attempt >= config_.parse_retries) {
        throw FormulationError("formulation reply is not valid JSON after " + std::to_string(attempt + 1) +
                               " attempts: " + e.what());
      }
      user = base_user + "\n\nYour previous reply could not be parsed as JSON (" + e.what() +
             "). Reply with the JSON object only.";
    }
  }

  if (!reply.contains("workflow") || !reply.at("workflow").is_array()) {
    throw FormulationError("formulation reply has no \"workflow\" list");
  }
  const json& workflow = reply.at("workflow");
  if (workflow.empty()) throw FormulationError("formulation reply has an empty workflow");

  std::vector<Constraint> candidates = parse_instruction(instruction);
  FormulationPlan plan;
  std::set<std::string> taken;
  for (const auto& jm : workflow) {
    if (!jm.is_object()) throw FormulationError("workflow entries must be objects");
    PlanModule m;
    m.module_type = json_text_field(jm, "module_type");
    m.purpose = json_text_field(jm, "purpose");
    m.constraints_addressed = json_text_field(jm, "constraints_addressed");
    m.module_specification = json_text_field(jm, "module_specification");
    m.input_output = json_text_field(jm, "input_output");

    Constraint c;
    c.kind = kind_from_module_type(m.module_type);
    c.summary = trim_copy(m.constraints_addressed.empty() ? m.purpose : m.constraints_addressed);
    if (c.summary.empty()) throw FormulationError("workflow module without a constraint summary");
    c.id = normalize_constraint_id(c.summary, taken);
    taken.insert(c.id);

    const Taxonomy guessed = guess_taxonomy(m);
    if (guessed != Taxonomy::custom) {
      if (auto params = find_params(guessed, m, candidates)) {
        Constraint typed = c;
        typed.taxonomy = guessed;
        typed.params = std::move(*params);
        if (taxonomy_kind(guessed) == c.kind && validate_constraint(typed).empty()) c = std::move(typed);
      }
    }
    plan.constraints.push_back(std::move(c));
    plan.raw_workflow.push_back(std::move(m));
  }

  std::vector<std::string> ids;
  for (const auto& c : plan.constraints) ids.push_back(c.id);
  if (reply.contains("formula") && reply.at("formula").is_string()) {
    std::map<std::string, std::string> alias;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      alias["m" + std::to_string(i + 1)] = ids[i];
      alias[ids[i]] = ids[i];
    }
    try {
      plan.formula = substitute_aliases(parse_formula(reply.at("formula").get<std::string>()), alias);
    } catch (const ParseError& e) {
      throw FormulationError(std::string("formulation formula does not parse: ") + e.what());
    }
  } else {
    plan.formula = Formula::all_of(ids);
  }
  return plan;
}

FormulationPlan Verifier::plan_from_constraints(std::vector<Constraint> constraints, std::optional<Formula> formula) {
  if (constraints.empty()) throw ValidationError("a plan needs at least one constraint");
  std::set<std::string> ids;
  for (const auto& c : constraints) {
    if (auto problems = validate_constraint(c); !problems.empty()) {
      throw ValidationError("constraint " + c.id + ": " + problems.front());
    }
    if (!ids.insert(c.id).second) throw ValidationError("duplicate constraint id " + c.id);
  }
  FormulationPlan plan;
  if (formula) {
    for (const auto& v : formula->variables()) {
      if (!ids.contains(v)) throw ValidationError("formula refers to unknown constraint '" + v + "'");
    }
    plan.formula = *formula;
  } else {
    std::vector<std::string> ordered;
    for (const auto& c : constraints) ordered.push_back(c.id);
    plan.formula = Formula::all_of(ordered);
  }
  plan.constraints = std::move(constraints);
  return plan;
}

namespace {

// One request to the checking agent for a module; `feedback` carries the
// previous failure on reflection rounds.
CheckerRoute request_route(const std::function<ChatResponse(const std::string&, const std::string&)>& ask,
                           const PlanModule& module, const FormulationPlan& plan, const std::string& instruction,
                           const std::string& output, const std::string& feedback) {
  json planning{{"reasoning_steps", json::array({""})}, {"workflow", json::array({module_to_json(module)})}};
  std::string user = prompts::fill(prompts::checking_user, {{"question", instruction},
                                                            {"answer", output},
                                                            {"orchestrator_planning_res", planning.dump(2)},
                                                            {"constraint_graph_code", print_formula(plan.formula)}});
  if (!feedback.empty()) {
    user += "\n\nYour previous verifier module failed: " + feedback +
            "\nFix the problem and reply with the JSON object again.";
  }
  const ChatResponse r = ask(std::string(prompts::checking_system), user);

  std::string code;
  try {
    json reply = json::parse(extract_json_object(r.text));
    const json& entry = reply.at("workflow").at(0);
    code = entry.at("verifier_module").get<std::string>();
  } catch (const std::exception& e) {
    throw AttemptFailure(std::string("checking reply is not a usable JSON workflow: ") + e.what());
  }
  if (kind_from_module_type(module.module_type) == ConstraintKind::semantic) {
    auto prompt = extract_prompt_variable(code);
    if (!prompt) throw AttemptFailure("neural verifier module does not define a `prompt` variable");
    return JudgeRoute{*prompt};
  }
  if (trim_copy(code).empty()) throw AttemptFailure("symbolic verifier module is empty");
  return GeneratedRoute{code};
}

}  // namespace

CheckerSpec Verifier::build_checker(const FormulationPlan& plan, std::size_t index, const std::string& instruction,
                                    const std::string& output, TokenUsage& usage) {
  if (index >= plan.constraints.size()) throw ValidationError("no plan constraint at index " + std::to_string(index));
  CheckerSpec spec;
  spec.constraint = plan.constraints[index];
  spec.constraint_id = spec.constraint.id;
  spec.reflection_budget = config_.reflection_budget;
  spec.module = index < plan.raw_workflow.size() ? plan.raw_workflow[index] : module_for_constraint(spec.constraint);

  const Taxonomy guessed = guess_taxonomy(*spec.module);
  if (spec.constraint.taxonomy == Taxonomy::custom && guessed != Taxonomy::custom && taxonomy_kind(guessed) &&
      *taxonomy_kind(guessed) != spec.constraint.kind) {
    spec.note = "plan classified this constraint as " + std::string(to_string(spec.constraint.kind)) +
                " while its wording matches the " + std::string(to_string(guessed)) + " template";
  }

  if (spec.constraint.kind == ConstraintKind::logic && has_builtin_checker(spec.constraint.taxonomy)) {
    spec.route = BuiltinRoute{};
    return spec;
  }
  const bool semantic = kind_from_module_type(spec.module->module_type) == ConstraintKind::semantic;
  auto asker = [&](const std::string& s, const std::string& u) { return ask(s, u, usage); };
  try {
    spec.route = request_route(asker, *spec.module, plan, instruction, output, "");
  } catch (const AttemptFailure& e) {
    spec.build_error = e.what();
    spec.route = semantic ? CheckerRoute{JudgeRoute{}} : CheckerRoute{GeneratedRoute{}};
  }
  return spec;
}

CheckResult Verifier::run_checker(const CheckerSpec& spec, const std::string& instruction, const std::string& output,
                                  const FormulationPlan& plan, TokenUsage& usage) {
  auto with_note = [&](std::string evidence) {
    return spec.note.empty() ? evidence : spec.note + "; " + evidence;
  };

  if (std::holds_alternative<BuiltinRoute>(spec.route)) {
    CheckResult r = run_builtin(spec.constraint, output);
    r.constraint_id = spec.constraint_id;
    r.evidence = with_note(r.evidence);
    return r;
  }

  auto asker = [&](const std::string& s, const std::string& u) { return ask(s, u, usage); };
  const PlanModule module = spec.module ? *spec.module : module_for_constraint(spec.constraint);
  CheckerRoute route = spec.route;
  std::string error = spec.build_error;

  for (int attempt = 1; attempt <= spec.reflection_budget; ++attempt) {
    try {
      if (attempt == 1 && !error.empty()) continue;  // building the route used this attempt
      if (attempt > 1) route = request_route(asker, module, plan, instruction, output, error);
      if (const auto* gen = std::get_if<GeneratedRoute>(&route)) {
        if (!runner_) throw AttemptFailure("no checker runner is configured");
        const RunOutcome run = runner_->run(gen->program);
        if (run.timed_out) throw AttemptFailure("checker program timed out");
        if (run.exit_status != 0) {
          throw AttemptFailure("checker program exited with status " + std::to_string(run.exit_status) + ": " +
                               excerpt(run.stderr_text, 400));
        }
        const ProgramVerdict v = read_program_verdict(run.stdout_text);
        if (v == ProgramVerdict::missing) {
          throw AttemptFailure("checker program did not print sat or unsat last; stdout: " +
                               excerpt(run.stdout_text, 200));
        }
        CheckResult r;
        r.constraint_id = spec.constraint_id;
        r.verdict = v == ProgramVerdict::sat;
        r.method = CheckMethod::generated_checker;
        r.attempts = attempt;
        r.evidence = with_note(std::string("generated checker printed ") + (r.verdict ? "sat" : "unsat"));
        return r;
      }
      const auto& judge = std::get<JudgeRoute>(route);
      const ChatResponse reply = ask("", judge.prompt, usage);
      const auto yes = parse_judge_reply(reply.text);
      if (!yes) throw AttemptFailure("judge reply is neither YES nor NO: " + excerpt(reply.text, 120));
      CheckResult r;
      r.constraint_id = spec.constraint_id;
      r.verdict = *yes;
      r.method = CheckMethod::llm_judge;
      r.attempts = attempt;
      r.evidence = with_note("judge answered " + excerpt(reply.text, 160));
      return r;
    } catch (const AttemptFailure& e) {
      error = e.what();
    }
  }

  const std::string prompt = prompts::fill(
      kFallbackJudge, {{"question", instruction}, {"answer", output}, {"constraint", spec.constraint.summary}});
  const ChatResponse reply = ask("", prompt, usage);
  const auto yes = parse_judge_reply(reply.text);
  if (!yes) {
    throw UncheckedConstraintError("constraint " + spec.constraint_id +
                                   " could not be checked; last checker error: " + error +
                                   "; fallback judge replied: " + excerpt(reply.text, 120));
  }
  CheckResult r;
  r.constraint_id = spec.constraint_id;
  r.verdict = *yes;
  r.method = CheckMethod::fallback_judge;
  r.attempts = spec.reflection_budget + 1;
  r.evidence = with_note("fallback judge answered " + excerpt(reply.text, 120) +
                         (error.empty() ? std::string() : " after checker error: " + excerpt(error, 200)));
  return r;
}

VerificationReport Verifier::solve(const FormulationPlan& plan, const std::vector<CheckResult>& results,
                                   VerdictMode mode, TokenUsage usage) {
  std::map<std::string, const CheckResult*> by_id;
  for (const auto& r : results) by_id[r.constraint_id] = &r;

  VerificationReport report;
  report.formula = plan.formula;
  report.constraints = plan.constraints;
  report.usage = usage;
  for (const auto& c : plan.constraints) {
    auto it = by_id.find(c.id);
    if (it == by_id.end()) throw ValidationError("no check result for constraint " + c.id);
    report.results.push_back(*it->second);
    report.assignment[c.id] = it->second->verdict;
    if (!it->second->verdict) report.violated.push_back(c.id);
  }
  report.overall = mode == VerdictMode::strict ? strict_conjunction_verdict(plan.formula, report.assignment)
                                               : evaluate_formula(plan.formula, report.assignment);

  std::ostringstream os;
  os << "verdict: " << to_string(report.overall) << " (" << to_string(mode) << " evaluation)\n";
  os << "formula: " << print_formula(plan.formula) << "\n";
  os << "constraints:\n";
  for (std::size_t i = 0; i < plan.constraints.size(); ++i) {
    const auto& c = plan.constraints[i];
    const auto& r = report.results[i];
    os << "- " << c.id << " [" << (r.verdict ? "satisfied" : "violated") << ", " << to_string(r.method)
       << "]: " << c.summary;
    if (!r.evidence.empty()) os << " | " << r.evidence;
    os << "\n";
  }
  os << "violated: ";
  if (report.violated.empty()) {
    os << "none";
  } else {
    for (std::size_t i = 0; i < report.violated.size(); ++i) os << (i ? ", " : "") << report.violated[i];
  }
  os << "\nsolver script:\n" << emit_solver_text(plan.formula, report.assignment);
  report.explanation = os.str();
  return report;
}

VerificationReport Verifier::verify_plan(const FormulationPlan& plan, const std::string& instruction,
                                         const std::string& output, VerdictMode mode, TokenUsage usage) {
  std::vector<CheckResult> results;
  for (std::size_t i = 0; i < plan.constraints.size(); ++i) {
    CheckerSpec spec = build_checker(plan, i, instruction, output, usage);
    results.push_back(run_checker(spec, instruction, output, plan, usage));
  }
  return solve(plan, results, mode, usage);
}

VerificationReport Verifier::verify(const std::string& instruction, const std::string& output, VerdictMode mode) {
  TokenUsage usage;
  FormulationPlan plan = formulate(instruction, output, usage);
  return verify_plan(plan, instruction, output, mode, usage);
}

Verdict Verifier::baseline_judge(const std::string& instruction, const std::string& output) {
  TokenUsage usage;
  return baseline_judge(instruction, output, usage);
}

Verdict Verifier::baseline_judge(const std::string& instruction, const std::string& output, TokenUsage& usage) {
  const std::string base = prompts::fill(prompts::baseline_judge, {{"instruction", instruction}, {"answer", output}});
  std::string user = base;
  std::string problem;
  for (int attempt = 0; attempt <= config_.parse_retries; ++attempt) {
    const ChatResponse r = ask("", user, usage);
    try {
      json reply = json::parse(extract_json_object(r.text));
      const std::string value = lower(trim_copy(reply.at("is_sat").get<std::string>()));
      if (value == "sat") return Verdict::sat;
      if (value == "unsat") return Verdict::unsat;
      problem = "\"is_sat\" must be \"sat\" or \"unsat\", got \"" + value + "\"";
    } catch (const std::exception& e) {
      problem = e.what();
    }
    user = base + "\n\nYour previous reply was unusable (" + problem + "). Reply with the JSON object only.";
  }
  throw JudgeError("baseline judge gave no usable verdict after " + std::to_string(config_.parse_retries + 1) +
                   " attempts: " + problem);
}

}  // namespace nsvif
