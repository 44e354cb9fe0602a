#pragma once

// Execution of generated checker programs through an external command.

#include <chrono>
#include <functional>
#include <string>

namespace nsvif {

struct RunOutcome {
  int exit_status = 0;  // -1 when killed on timeout
  bool timed_out = false;
  std::string stdout_text;
  std::string stderr_text;
};

class ProgramRunner {
 public:
  virtual ~ProgramRunner() = default;
  virtual RunOutcome run(const std::string& program) = 0;
};

/// Writes the program to a temporary file and runs `command_template` through
/// /bin/sh with `{file}` replaced by that file's path, e.g. "python3 {file}".
/// The child is killed when it outlives `timeout`.
class CommandRunner : public ProgramRunner {
 public:
  explicit CommandRunner(std::string command_template,
                         std::chrono::milliseconds timeout = std::chrono::seconds(10));
  RunOutcome run(const std::string& program) override;

 private:
  std::string command_template_;
  std::chrono::milliseconds timeout_;
};

/// Runner backed by a callable, for scripted tests.
class CallbackRunner : public ProgramRunner {
 public:
  explicit CallbackRunner(std::function<RunOutcome(const std::string&)> fn) : fn_(std::move(fn)) {}
  RunOutcome run(const std::string& program) override { return fn_(program); }

 private:
  std::function<RunOutcome(const std::string&)> fn_;
};

/// Verdict printed on the last non-empty stdout line, or `missing`.
enum class ProgramVerdict { sat, unsat, missing };
ProgramVerdict read_program_verdict(const std::string& stdout_text);

}  // namespace nsvif
