#include "nsvif/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>

#include "nsvif/checkers.hpp"
#include "nsvif/error.hpp"
#include "nsvif/harness.hpp"
#include "nsvif/json_io.hpp"
#include "nsvif/repair.hpp"
#include "nsvif/runner.hpp"
#include "nsvif/synth.hpp"
#include "nsvif/writer.hpp"

namespace nsvif {

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

std::shared_ptr<ProgramRunner> make_runner(const Config& config) {
  if (config.checker_runner.empty()) return nullptr;
  return std::make_shared<CommandRunner>(config.checker_runner, std::chrono::seconds(config.checker_timeout_seconds));
}

PipelineConfig pipeline_config(const Config& config) {
  PipelineConfig p;
  p.model = config.model;
  p.temperature = config.temperature;
  p.reflection_budget = config.reflection_budget;
  p.parse_retries = config.parse_retries;
  return p;
}

std::vector<Constraint> read_constraints(const std::filesystem::path& path) {
  const json j = json::parse(read_text_file(path));
  auto cs = j.get<std::vector<Constraint>>();
  for (const auto& c : cs) {
    if (auto problems = validate_constraint(c); !problems.empty()) {
      throw ValidationError(path.string() + ": constraint " + c.id + ": " + problems.front());
    }
  }
  return cs;
}

bool needs_model(const Constraint& c) {
  return c.kind != ConstraintKind::logic || !has_builtin_checker(c.taxonomy);
}

void emit(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
  if (path) {
    write_text_file(*path, text);
  } else {
    out << text;
  }
}

std::filesystem::path default_predictions_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_extension();
  p += ".predictions.jsonl";
  return p;
}

}  // namespace

GatewayMode parse_gateway_mode(const std::string& text) {
  if (text == "live") return GatewayMode::live;
  if (text == "record") return GatewayMode::record;
  if (text == "replay") return GatewayMode::replay;
  throw ParamError("gateway mode must be live, record or replay, got '" + text + "'");
}

std::string_view to_string(GatewayMode mode) {
  switch (mode) {
    case GatewayMode::live: return "live";
    case GatewayMode::record: return "record";
    case GatewayMode::replay: return "replay";
  }
  return "live";
}

Config load_config(const std::optional<std::filesystem::path>& path) {
  Config c;
  c.model = env_or("NSVIF_MODEL", c.model);
  c.base_url = env_or("NSVIF_BASE_URL", c.base_url);
  if (!path) return c;

  json j;
  try {
    j = json::parse(read_text_file(*path));
  } catch (const json::exception& e) {
    throw ValidationError(path->string() + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(path->string() + ": config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "model") c.model = v.get<std::string>();
      else if (key == "temperature") c.temperature = v.get<double>();
      else if (key == "base_url") c.base_url = v.get<std::string>();
      else if (key == "checker_runner") c.checker_runner = v.get<std::string>();
      else if (key == "checker_timeout_seconds") c.checker_timeout_seconds = v.get<int>();
      else if (key == "concurrency") c.concurrency = v.get<int>();
      else if (key == "reflection_budget") c.reflection_budget = v.get<int>();
      else if (key == "parse_retries") c.parse_retries = v.get<int>();
      else if (key == "regeneration_budget") c.regeneration_budget = v.get<int>();
      else if (key == "repair_budget") c.repair_budget = v.get<int>();
      else if (key == "mode") c.mode = parse_verdict_mode(v.get<std::string>());
      else if (key == "gateway") c.gateway = parse_gateway_mode(v.get<std::string>());
      else if (key == "cassette_dir") c.cassette_dir = v.get<std::string>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else throw ValidationError(path->string() + ": unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError(path->string() + ": " + e.what());
  }
  if (c.concurrency < 1) throw ValidationError("concurrency must be at least 1");
  if (c.reflection_budget < 0 || c.parse_retries < 0 || c.repair_budget < 0 || c.regeneration_budget < 0) {
    throw ValidationError("budgets must be at least 0");
  }
  return c;
}

std::shared_ptr<Gateway> make_gateway(const Config& config) {
  std::optional<std::filesystem::path> cassette;
  if (config.gateway != GatewayMode::live) {
    if (!config.cassette_dir) throw ParamError("--cassette-dir is required for record and replay");
    cassette = *config.cassette_dir / "cassette.json";
  }
  std::shared_ptr<ChatBackend> backend;
  if (config.gateway != GatewayMode::replay) {
    auto options = HttpChatBackend::options_from_env();
    if (!config.base_url.empty()) options.base_url = config.base_url;
    options.max_in_flight = config.concurrency;
    backend = std::make_shared<HttpChatBackend>(options);
  }
  return std::make_shared<Gateway>(config.gateway, backend, cassette);
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"nsvif: check whether a response follows a multi-constraint instruction", "nsvif"};
  app.require_subcommand(1);

  std::optional<std::string> config_path, cassette_dir, gateway_mode, verdict_mode, model;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--cassette-dir", cassette_dir, "Directory holding cassette.json");
  app.add_option("--gateway", gateway_mode, "live, record or replay")->check(CLI::IsMember({"live", "record", "replay"}));
  app.add_option("--mode", verdict_mode, "Verdict mode: standard or strict")
      ->check(CLI::IsMember({"standard", "strict"}));
  app.add_option("--model", model, "Model name");

  auto* verify = app.add_subcommand("verify", "Verify one response against its instruction");
  std::string v_instruction, v_output;
  std::optional<std::string> v_constraints, v_report;
  verify->add_option("--instruction", v_instruction, "Instruction text file")->required();
  verify->add_option("--output", v_output, "Response text file")->required();
  verify->add_option("--constraints", v_constraints, "JSON constraint list; skips formulation");
  verify->add_option("--report", v_report, "Also write the report JSON here");

  auto* synth = app.add_subcommand("synth", "Synthesize a labeled benchmark");
  std::string s_pools, s_out, s_generator = "template";
  std::optional<std::uint64_t> s_seed;
  std::optional<std::string> s_stats, s_overrides;
  std::size_t s_cap = 100;
  synth->add_option("--pools", s_pools, "Value pool JSON")->required();
  synth->add_option("--out", s_out, "Dataset JSONL to write")->required();
  synth->add_option("--seed", s_seed, "Seed for mutation rotation and writer variants");
  synth->add_option("--generator", s_generator, "template or llm")->check(CLI::IsMember({"template", "llm"}));
  synth->add_option("--stats", s_stats, "Write dataset statistics JSON here");
  synth->add_option("--overrides", s_overrides, "Semantic review overrides JSON");
  synth->add_option("--cap", s_cap, "Items per complexity group at most");

  auto* eval = app.add_subcommand("eval", "Score a verifier on a labeled dataset");
  std::string e_dataset, e_out, e_verifier = "nsvif";
  std::optional<std::string> e_predictions;
  std::optional<int> e_workers;
  bool e_given = false;
  eval->add_option("--dataset", e_dataset, "Dataset JSONL")->required();
  eval->add_option("--verifier", e_verifier, "nsvif or baseline")->check(CLI::IsMember({"nsvif", "baseline"}));
  eval->add_option("--out", e_out, "Metrics JSON to write")->required();
  eval->add_option("--predictions", e_predictions, "Per-item predictions JSONL");
  eval->add_option("--workers", e_workers, "Items verified in parallel");
  eval->add_flag("--given-constraints", e_given, "Use each item's constraints instead of formulating");

  auto* repair = app.add_subcommand("repair", "Regenerate a response until it verifies");
  std::string r_instruction, r_feedback = "detailed";
  std::optional<std::string> r_out;
  std::optional<int> r_budget;
  repair->add_option("--instruction", r_instruction, "Instruction text file")->required();
  repair->add_option("--feedback", r_feedback, "detailed or boolean")->check(CLI::IsMember({"detailed", "boolean"}));
  repair->add_option("--out", r_out, "Transcript JSON to write");
  repair->add_option("--budget", r_budget, "Generation attempts at most");

  for (auto* sub : {verify, synth, eval, repair}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return 2;
  }

  try {
    Config config = load_config(config_path ? std::optional<std::filesystem::path>(*config_path) : std::nullopt);
    if (cassette_dir) config.cassette_dir = *cassette_dir;
    if (gateway_mode) config.gateway = parse_gateway_mode(*gateway_mode);
    if (verdict_mode) config.mode = parse_verdict_mode(*verdict_mode);
    if (model) config.model = *model;

    if (verify->parsed()) {
      const std::string instruction = read_text_file(v_instruction);
      const std::string output = read_text_file(v_output);
      VerificationReport report;
      if (v_constraints) {
        Verifier verifier(nullptr, pipeline_config(config), make_runner(config));
        const auto plan = Verifier::plan_from_constraints(read_constraints(*v_constraints));
        const bool uses_model = std::any_of(plan.constraints.begin(), plan.constraints.end(), needs_model);
        if (uses_model) verifier = Verifier(make_gateway(config), pipeline_config(config), make_runner(config));
        report = verifier.verify_plan(plan, instruction, output, config.mode);
      } else {
        Verifier verifier(make_gateway(config), pipeline_config(config), make_runner(config));
        report = verifier.verify(instruction, output, config.mode);
      }
      const std::string text = dump_pretty(json(report));
      if (v_report) write_text_file(*v_report, text);
      out << text;
      return report.overall == Verdict::sat ? 0 : 1;
    }

    if (synth->parsed()) {
      const ValuePools pools = load_pools(s_pools);
      SynthOptions options;
      options.seed = s_seed.value_or(config.seed);
      options.cap = s_cap;
      options.budget = config.regeneration_budget;
      if (s_overrides) options.semantic_overrides = load_semantic_overrides(*s_overrides);
      std::unique_ptr<OutputGenerator> generator;
      if (s_generator == "llm") {
        generator = std::make_unique<GatewayOutputGenerator>(make_gateway(config), config.model, config.temperature);
      } else {
        generator = std::make_unique<TemplateWriter>(WriterOptions{true});
      }
      const auto items = build_dataset(default_groups(), pools, *generator, options);
      write_dataset(s_out, items);
      const DatasetStats stats = compute_stats(items);
      json by_c = json::object();
      for (const auto& [c, n] : stats.per_complexity) by_c[std::to_string(c)] = n;
      const json j{{"total", stats.total},
                   {"sat", stats.sat},
                   {"unsat", stats.unsat},
                   {"sat_percent", stats.sat_percent},
                   {"unsat_percent", stats.unsat_percent},
                   {"per_complexity", by_c},
                   {"violations_by_taxonomy", stats.violations_by_taxonomy}};
      if (s_stats) write_text_file(*s_stats, dump_pretty(j));
      out << "items " << stats.total << ", sat " << stats.sat << " (" << stats.sat_percent << "%), unsat "
          << stats.unsat << " (" << stats.unsat_percent << "%)\n";
      return 0;
    }

    if (eval->parsed()) {
      const auto dataset = read_dataset(e_dataset);
      const bool needs_gateway = e_verifier == "baseline" || !e_given ||
                                 std::any_of(dataset.begin(), dataset.end(), [](const BenchItem& item) {
                                   return std::any_of(item.constraints.begin(), item.constraints.end(), needs_model);
                                 });
      auto gateway = needs_gateway ? make_gateway(config) : nullptr;
      Verifier verifier(gateway, pipeline_config(config), make_runner(config));
      VerifierFn fn;
      if (e_verifier == "baseline") {
        fn = [&](const BenchItem& item) { return verifier.baseline_judge(item.instruction, item.output); };
      } else if (e_given) {
        fn = [&](const BenchItem& item) {
          const auto plan = Verifier::plan_from_constraints(item.constraints, item.formula);
          return verifier.verify_plan(plan, item.instruction, item.output, config.mode).overall;
        };
      } else {
        fn = [&](const BenchItem& item) { return verifier.verify(item.instruction, item.output, config.mode).overall; };
      }
      const auto result = evaluate_verifier(fn, dataset, e_workers.value_or(config.concurrency));
      write_text_file(e_out, dump_pretty(eval_result_to_json(result)));
      const std::filesystem::path predictions =
          e_predictions ? std::filesystem::path(*e_predictions) : default_predictions_path(e_out);
      write_text_file(predictions, predictions_to_jsonl(result.predictions));
      const Metrics& m = result.metrics;
      out << "precision " << format_ratio(m.precision) << ", recall " << format_ratio(m.recall) << ", f1 "
          << format_ratio(m.f1) << ", pass@1 " << format_ratio(m.pass_at_1) << ", errored " << m.errored << "\n";
      return 0;
    }

    if (repair->parsed()) {
      const std::string instruction = read_text_file(r_instruction);
      auto gateway = make_gateway(config);
      Verifier verifier(gateway, pipeline_config(config), make_runner(config));
      GatewayConversationGenerator generator(gateway, config.model, config.temperature);
      const ReportFn report_fn = [&](const std::string& instr, const std::string& output) {
        return verifier.verify(instr, output, config.mode);
      };
      try {
        const auto transcript = repair_until_sat(instruction, generator, report_fn, parse_feedback_mode(r_feedback),
                                                 r_budget.value_or(config.repair_budget));
        emit(r_out, dump_pretty(transcript_to_json(transcript)), out);
        if (r_out) {
          out << "outcome " << to_string(transcript.outcome) << " after " << transcript.iterations
              << " generations\n";
        }
        return 0;
      } catch (const RepairError& e) {
        if (r_out) write_text_file(*r_out, dump_pretty(transcript_to_json(e.partial())));
        throw;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace nsvif
