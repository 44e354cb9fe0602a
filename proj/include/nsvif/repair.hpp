#pragma once

// Verify, feed the violations back to the generator, regenerate; stop at the
// first sat verdict or when the iteration budget runs out.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nsvif/error.hpp"
#include "nsvif/gateway.hpp"
#include "nsvif/json_io.hpp"
#include "nsvif/model.hpp"

namespace nsvif {

enum class FeedbackMode { detailed, boolean };
std::string_view to_string(FeedbackMode mode);
FeedbackMode parse_feedback_mode(std::string_view text);

inline constexpr std::string_view kBooleanFeedback = "unsat, regenerate";
inline constexpr int kDefaultRepairBudget = 15;

struct ChatTurn {
  std::string role;  // "user" or "assistant"
  std::string content;
};

/// Produces the next answer given the whole conversation so far.
class ConversationGenerator {
 public:
  virtual ~ConversationGenerator() = default;
  virtual std::string generate(const std::vector<ChatTurn>& history) = 0;
};

/// Sends the conversation through a gateway as one user message.
class GatewayConversationGenerator : public ConversationGenerator {
 public:
  GatewayConversationGenerator(std::shared_ptr<Gateway> gateway, std::string model,
                               double temperature = kDefaultTemperature);
  std::string generate(const std::vector<ChatTurn>& history) override;

 private:
  std::shared_ptr<Gateway> gateway_;
  std::string model_;
  double temperature_;
};

using ReportFn = std::function<VerificationReport(const std::string& instruction, const std::string& output)>;

struct RepairTurn {
  std::string output;
  VerificationReport report;
  std::string feedback;  // empty on the final, sat turn
};

enum class RepairOutcome { converged, budget_exhausted };
std::string_view to_string(RepairOutcome outcome);

struct RepairTranscript {
  std::string instruction;
  FeedbackMode mode = FeedbackMode::detailed;
  std::vector<RepairTurn> turns;
  RepairOutcome outcome = RepairOutcome::budget_exhausted;
  int iterations = 0;
};

/// Raised when the generator or verifier fails; carries the turns so far.
class RepairError : public Error {
 public:
  RepairError(const std::string& message, RepairTranscript partial)
      : Error(message), partial_(std::move(partial)) {}
  const RepairTranscript& partial() const noexcept { return partial_; }

 private:
  RepairTranscript partial_;
};

/// One line per violated constraint, ordered by id:
/// "- <id>: <summary>: <evidence>". Throws ValidationError for a sat report.
std::string render_feedback(const VerificationReport& report);

RepairTranscript repair_until_sat(const std::string& instruction, ConversationGenerator& generator,
                                  const ReportFn& verifier, FeedbackMode mode, int budget = kDefaultRepairBudget);

json transcript_to_json(const RepairTranscript& transcript);

}  // namespace nsvif
