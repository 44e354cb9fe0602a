#include "nsvif/repair.hpp"

#include <algorithm>

namespace nsvif {

std::string_view to_string(FeedbackMode mode) { return mode == FeedbackMode::boolean ? "boolean" : "detailed"; }

FeedbackMode parse_feedback_mode(std::string_view text) {
  if (text == "detailed") return FeedbackMode::detailed;
  if (text == "boolean") return FeedbackMode::boolean;
  throw ValidationError("unknown feedback mode '" + std::string(text) + "' (expected detailed or boolean)");
}

std::string_view to_string(RepairOutcome outcome) {
  return outcome == RepairOutcome::converged ? "converged" : "budget_exhausted";
}

GatewayConversationGenerator::GatewayConversationGenerator(std::shared_ptr<Gateway> gateway, std::string model,
                                                           double temperature)
    : gateway_(std::move(gateway)), model_(std::move(model)), temperature_(temperature) {}

std::string GatewayConversationGenerator::generate(const std::vector<ChatTurn>& history) {
  ChatRequest request;
  request.model = model_;
  request.temperature = temperature_;
  if (history.size() == 1) {
    request.user = history.front().content;
  } else {
    for (const auto& turn : history) {
      if (!request.user.empty()) request.user += "\n\n";
      request.user += "[" + turn.role + "]\n" + turn.content;
    }
  }
  return gateway_->complete(request).text;
}

std::string render_feedback(const VerificationReport& report) {
  if (report.overall == Verdict::sat) throw ValidationError("feedback needs an unsat report");
  std::vector<std::string> ids = report.violated;
  std::sort(ids.begin(), ids.end());
  std::string out;
  for (const auto& id : ids) {
    auto c = std::find_if(report.constraints.begin(), report.constraints.end(),
                          [&](const Constraint& x) { return x.id == id; });
    auto r = std::find_if(report.results.begin(), report.results.end(),
                          [&](const CheckResult& x) { return x.constraint_id == id; });
    out += "- " + id;
    if (c != report.constraints.end() && !c->summary.empty()) out += ": " + c->summary;
    if (r != report.results.end() && !r->evidence.empty()) out += ": " + r->evidence;
    out += "\n";
  }
  if (ids.empty()) out = "- the constraints are not satisfied together: " + report.explanation;
  return out;
}

RepairTranscript repair_until_sat(const std::string& instruction, ConversationGenerator& generator,
                                  const ReportFn& verifier, FeedbackMode mode, int budget) {
  if (budget < 1) throw ValidationError("repair budget must be at least 1");
  RepairTranscript t;
  t.instruction = instruction;
  t.mode = mode;
  std::vector<ChatTurn> history{{"user", instruction}};
  while (t.iterations < budget) {
    RepairTurn turn;
    try {
      turn.output = generator.generate(history);
      ++t.iterations;
      turn.report = verifier(instruction, turn.output);
    } catch (const std::exception& e) {
      throw RepairError(std::string("repair stopped at iteration ") + std::to_string(t.iterations) + ": " + e.what(),
                        t);
    }
    if (turn.report.overall == Verdict::sat) {
      t.turns.push_back(std::move(turn));
      t.outcome = RepairOutcome::converged;
      return t;
    }
    turn.feedback = mode == FeedbackMode::detailed
                        ? "Your answer does not follow the instruction. Violated constraints:\n" +
                              render_feedback(turn.report) + "Please regenerate the full answer."
                        : std::string(kBooleanFeedback);
    history.push_back({"assistant", turn.output});
    history.push_back({"user", turn.feedback});
    t.turns.push_back(std::move(turn));
  }
  t.outcome = RepairOutcome::budget_exhausted;
  return t;
}

json transcript_to_json(const RepairTranscript& t) {
  json turns = json::array();
  for (const auto& turn : t.turns) {
    turns.push_back(json{{"output", turn.output}, {"report", turn.report}, {"feedback", turn.feedback}});
  }
  return json{{"instruction", t.instruction},
              {"feedback_mode", std::string(to_string(t.mode))},
              {"outcome", std::string(to_string(t.outcome))},
              {"iterations", t.iterations},
              {"turns", turns}};
}

}  // namespace nsvif
