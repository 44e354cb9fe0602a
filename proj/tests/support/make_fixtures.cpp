// Regenerates the recorded fixtures under tests/fixtures: cassettes for the
// two worked examples, the 20-item end-to-end dataset with its cassette, and
// a repair conversation. Everything is driven by the scripted model, so the
// output is byte-identical across runs.
//
// usage: make_fixtures <source fixtures dir> <output dir> <pools json>

#include <filesystem>
#include <iostream>
#include <map>

#include "nsvif/error.hpp"
#include "nsvif/json_io.hpp"
#include "nsvif/pipeline.hpp"
#include "nsvif/repair.hpp"
#include "nsvif/synth.hpp"
#include "nsvif/templates.hpp"
#include "nsvif/writer.hpp"
#include "scripted_model.hpp"

namespace fs = std::filesystem;
using namespace nsvif;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::shared_ptr<Gateway> recorder(const fs::path& dir, testing::ScriptedModelOptions options) {
  fs::create_directories(dir);
  fs::remove(dir / "cassette.json");
  return std::make_shared<Gateway>(GatewayMode::record, testing::scripted_backend(std::move(options)),
                                   dir / "cassette.json");
}

BenchItem worked_example(const fs::path& dir, const std::string& id, int complexity) {
  BenchItem item;
  item.id = id;
  item.complexity = complexity;
  item.instruction = read_text_file(dir / "instruction.txt");
  item.output = read_text_file(dir / "output.txt");
  item.constraints = parse_instruction(item.instruction);
  std::vector<std::string> ids;
  for (const auto& c : item.constraints) ids.push_back(c.id);
  item.formula = Formula::all_of(ids);
  item.label = Verdict::unsat;  // both examples are shown as failing outputs
  item.violated = label_output(item.constraints, item.output).violated;
  return item;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: make_fixtures <source fixtures dir> <output dir> <pools json>\n";
    return 2;
  }
  const fs::path source = argv[1];
  const fs::path out = argv[2];
  const fs::path pools_path = argv[3];
  int mismatches = 0;

  try {
    for (const char* name : {"word_count_example", "sentence_length_example"}) {
      const std::string instruction = read_text_file(source / name / "instruction.txt");
      const std::string output = read_text_file(source / name / "output.txt");
      auto gateway = recorder(out / name / "cassette", {});
      Verifier verifier(gateway, PipelineConfig{});
      const auto report = verifier.verify(instruction, output, VerdictMode::standard);
      verifier.baseline_judge(instruction, output);
      std::cout << name << ": " << to_string(report.overall) << ", violated";
      for (const auto& id : report.violated) std::cout << " " << id;
      std::cout << "\n";
    }

    // Two items per complexity group (one sat, one unsat target), one of them
    // with a tone judged off on review, plus both worked examples.
    const ValuePools pools = load_pools(pools_path);
    TemplateWriter writer(WriterOptions{true});
    std::vector<BenchItem> full = build_dataset(default_groups(), pools, writer, SynthOptions{});
    std::vector<BenchItem> items;
    std::map<int, int> taken;
    for (const auto& item : full) {
      if (taken[item.complexity]++ < 2) items.push_back(item);
    }
    std::map<std::string, std::string> tone_rejected;  // output -> constraint summary
    for (auto& item : items) {
      if (item.id != "c3_001") continue;
      for (const auto& c : item.constraints) {
        if (c.taxonomy == Taxonomy::writing_tone) {
          apply_semantic_overrides(item, {c.id});
          tone_rejected[trim(item.output)] = c.summary;
        }
      }
    }
    items.push_back(worked_example(source / "word_count_example", "word_count_example", 4));
    items.push_back(worked_example(source / "sentence_length_example", "sentence_length_example", 7));
    fs::create_directories(out / "e2e");
    write_dataset(out / "e2e" / "dataset.jsonl", items);

    testing::ScriptedModelOptions options;
    options.judge = [tone_rejected](const std::string& answer, const std::string& constraint) -> std::optional<bool> {
      auto it = tone_rejected.find(trim(answer));
      if (it != tone_rejected.end() && it->second == constraint) return false;
      return std::nullopt;
    };
    auto gateway = recorder(out / "e2e" / "cassette", options);
    Verifier verifier(gateway, PipelineConfig{});
    for (const auto& item : items) {
      const auto report = verifier.verify(item.instruction, item.output, VerdictMode::standard);
      verifier.baseline_judge(item.instruction, item.output);
      if (report.overall != item.label) {
        ++mismatches;
        std::cerr << item.id << ": verdict " << to_string(report.overall) << " but labelled "
                  << to_string(item.label) << "\n";
      }
    }
    std::cout << "e2e: " << items.size() << " items, " << gateway->cassette().size() << " recorded exchanges\n";

    // Repair conversation over a C=4 instruction, both feedback modes.
    const std::string repair_instruction = full.at(300).instruction;
    fs::create_directories(out / "repair");
    write_text_file(out / "repair" / "instruction.txt", repair_instruction);
    testing::ScriptedModelOptions repair_options;
    repair_options.writer = testing::scripted_repair_writer;
    auto repair_gateway = recorder(out / "repair" / "cassette", repair_options);
    Verifier repair_verifier(repair_gateway, PipelineConfig{});
    GatewayConversationGenerator generator(repair_gateway, PipelineConfig{}.model);
    const ReportFn report_fn = [&](const std::string& i, const std::string& o) {
      return repair_verifier.verify(i, o, VerdictMode::standard);
    };
    for (FeedbackMode mode : {FeedbackMode::detailed, FeedbackMode::boolean}) {
      const auto t = repair_until_sat(repair_instruction, generator, report_fn, mode);
      std::cout << "repair (" << to_string(mode) << "): " << to_string(t.outcome) << " after " << t.iterations
                << " generations\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return mismatches == 0 ? 0 : 1;
}
