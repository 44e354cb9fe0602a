#pragma once

// Command-line front end: configuration loading and the nsvif subcommands
// (verify, synth, eval, repair).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsvif/gateway.hpp"
#include "nsvif/pipeline.hpp"

namespace nsvif {

struct Config {
  std::string model = "gpt-4.1";
  double temperature = kDefaultTemperature;
  std::string base_url;
  /// Shell command with a {file} placeholder; empty disables generated checkers.
  std::string checker_runner = "python3 {file}";
  int checker_timeout_seconds = 10;
  int concurrency = 4;
  int reflection_budget = 3;
  int parse_retries = 2;
  int regeneration_budget = 5;
  int repair_budget = 15;
  VerdictMode mode = VerdictMode::standard;
  GatewayMode gateway = GatewayMode::live;
  std::optional<std::filesystem::path> cassette_dir;
  std::uint64_t seed = 0;
};

/// Defaults, then NSVIF_MODEL / NSVIF_BASE_URL, then the JSON file if given.
/// Unknown keys in the file are a ValidationError.
Config load_config(const std::optional<std::filesystem::path>& path);

GatewayMode parse_gateway_mode(const std::string& text);
std::string_view to_string(GatewayMode mode);

/// Gateway for `config`; record and replay use <cassette_dir>/cassette.json.
std::shared_ptr<Gateway> make_gateway(const Config& config);

/// Runs one invocation; `args` excludes the program name. Returns the exit
/// status: verify gives 0 for sat and 1 for unsat, every subcommand gives 2
/// on usage or runtime errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsvif
