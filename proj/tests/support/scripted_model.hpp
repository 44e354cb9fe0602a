#pragma once

// Deterministic stand-in for the chat model. It answers the formulation,
// checking, judge and baseline prompts by reading the instruction's template
// lines, and can act as a writer for repair conversations.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "nsvif/gateway.hpp"

namespace nsvif::testing {

struct ScriptedModelOptions {
  /// Judge verdict for (answer, constraint text); nullopt or no hook means YES.
  std::function<std::optional<bool>(const std::string& answer, const std::string& constraint)> judge;
  /// Emitted as the formulation reply's "formula" field when set.
  std::optional<std::string> formula;
  /// Checker program handed back for symbolic modules without a builtin.
  std::string symbolic_program = "print(\"sat\")";
  /// Reply for prompts that are none of the verifier's (e.g. repair turns).
  std::function<std::string(const ChatRequest&)> writer;
};

ChatResponse scripted_reply(const ChatRequest& request, const ScriptedModelOptions& options);

std::shared_ptr<CallbackBackend> scripted_backend(ScriptedModelOptions options = {});

/// Text between the first `open` and the following `close`; the rest of the
/// text when `close` is empty or absent. Throws GatewayError if `open` is missing.
std::string between(const std::string& text, const std::string& open, const std::string& close);

/// Writer for repair conversations over templated instructions: the first
/// turn breaks one logic constraint, later turns comply fully.
std::string scripted_repair_writer(const ChatRequest& request);

}  // namespace nsvif::testing
