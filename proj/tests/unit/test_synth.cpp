#include <doctest.h>

#include <filesystem>

#include "nsvif/error.hpp"
#include "nsvif/json_io.hpp"
#include "nsvif/synth.hpp"
#include "nsvif/templates.hpp"
#include "nsvif/writer.hpp"

using namespace nsvif;
namespace fs = std::filesystem;

namespace {

ValuePools pools() { return load_pools(fs::path(NSVIF_SOURCE_DIR) / "data" / "default_pools.json"); }

std::vector<Constraint> three() {
  return {make_constraint(Taxonomy::writing_tone, {{"tone", std::string("calm")}}),
          make_constraint(Taxonomy::keyword_inclusion, {{"keywords", std::vector<std::string>{"scrum"}}}),
          make_constraint(Taxonomy::even_odd_word_count, {{"parity", std::string("even")}})};
}

// Writes whatever it was last told to write.
class Fixed : public OutputGenerator {
 public:
  explicit Fixed(std::vector<std::string> outputs) : outputs_(std::move(outputs)) {}
  std::string generate(const GenerationRequest& r) override {
    requests.push_back(r);
    return outputs_[std::min(requests.size() - 1, outputs_.size() - 1)];
  }
  std::vector<GenerationRequest> requests;

 private:
  std::vector<std::string> outputs_;
};

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("pool JSON round-trip") {
    const ValuePools p = pools();
    CHECK(p.tones.size() == 4);
    const ValuePools back = pools_from_json_text(pools_to_json_text(p));
    CHECK(pools_to_json_text(back) == pools_to_json_text(p));
    CHECK_THROWS(pools_from_json_text("{\"topics\": 3}"));
  }

  TEST_CASE("groups cover complexities two to ten") {
    const auto groups = default_groups();
    REQUIRE(groups.size() == 9);
    for (std::size_t i = 0; i < groups.size(); ++i) {
      CHECK(groups[i].complexity == static_cast<int>(i) + 2);
      CHECK(groups[i].constraint_types.size() == i + 2);
    }
  }

  TEST_CASE("enumeration is in product order and capped") {
    const auto groups = default_groups();
    const auto a = synth_group(groups[0], pools());
    const auto b = synth_group(groups[0], pools(), 7);
    REQUIRE(b.size() == 7);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i].text == a[i].text);
    for (const auto& inst : a) {
      CHECK(inst.constraints.size() == 2);
      CHECK(parse_instruction(inst.text) == inst.constraints);
    }
    ValuePools empty = pools();
    empty.tones.clear();
    bool uses_tone = false;
    for (auto t : groups[0].constraint_types) uses_tone = uses_tone || t == Taxonomy::writing_tone;
    if (uses_tone) CHECK_THROWS_AS(synth_group(groups[0], empty), ParamError);
  }

  TEST_CASE("mutation drops the rotated logic constraint") {
    const auto cs = three();
    const auto m0 = mutate_instruction(cs, 0);
    CHECK(m0.omitted.id == "keyword_inclusion");
    CHECK(m0.constraints.size() == 2);
    CHECK(m0.text.find("Include these keywords") == std::string::npos);
    CHECK(mutate_instruction(cs, 1).omitted.id == "even_odd_word_count");
    CHECK(mutate_instruction(cs, 2).omitted.id == "keyword_inclusion");
    CHECK_THROWS_AS(mutate_instruction({cs[0]}, 0), ParamError);
  }

  TEST_CASE("labels come from the logic checkers") {
    const auto cs = three();
    CHECK(label_output(cs, "scrum is nice").label == Verdict::unsat);   // three words, odd
    CHECK(label_output(cs, "scrum is nice!").violated == std::vector<std::string>{"even_odd_word_count"});
    CHECK(label_output(cs, "scrum is very nice").label == Verdict::sat);
    const auto reviewed = label_output(cs, "scrum is very nice", {"writing_tone"});
    CHECK(reviewed.violated == std::vector<std::string>{"writing_tone"});
  }

  TEST_CASE("sat rounds revise with checker feedback until they pass") {
    SynthInstruction inst;
    inst.constraints = three();
    inst.formula = Formula::all_of({"writing_tone", "keyword_inclusion", "even_odd_word_count"});
    inst.text = render_instruction(inst.constraints);
    Fixed gen({"nothing here", "scrum here now", "scrum is here now"});
    const BenchItem item = generate_labeled_output("c3_001", 3, inst, gen, Verdict::sat, 0, 5);
    CHECK(item.label == Verdict::sat);
    REQUIRE(gen.requests.size() == 3);
    CHECK(gen.requests[1].attempt == 1);
    CHECK(gen.requests[1].feedback.find("- keyword_inclusion:") == 0);
    CHECK(gen.requests[1].previous_output == "nothing here");
  }

  TEST_CASE("budget exhaustion keeps the last output and its true label") {
    SynthInstruction inst;
    inst.constraints = three();
    inst.formula = Formula::all_of({"writing_tone", "keyword_inclusion", "even_odd_word_count"});
    inst.text = render_instruction(inst.constraints);
    Fixed gen({"scrum is very nice"});
    const BenchItem item = generate_labeled_output("c3_002", 3, inst, gen, Verdict::unsat, 0, 2);
    CHECK(gen.requests.size() == 3);
    CHECK(item.label == Verdict::sat);
    CHECK(gen.requests[0].omitted->id == "keyword_inclusion");
    CHECK(gen.requests[0].instruction.find("Include these keywords") == std::string::npos);
  }

  TEST_CASE("dataset ids, alternation and overrides") {
    const auto groups = default_groups();
    TemplateWriter writer(WriterOptions{true});
    SynthOptions options;
    options.cap = 4;
    options.semantic_overrides["c3_001"] = {"writing_tone"};
    const auto items = build_dataset({groups[0], groups[1]}, pools(), writer, options);
    REQUIRE(items.size() == 8);
    CHECK(items[0].id == "c2_001");
    CHECK(items[7].id == "c3_004");
    CHECK(items[1].label == Verdict::unsat);
    const auto& c3 = items[4];
    bool has_tone = false;
    for (const auto& c : c3.constraints) has_tone = has_tone || c.taxonomy == Taxonomy::writing_tone;
    if (has_tone) {
      CHECK(c3.label == Verdict::unsat);
      CHECK(std::find(c3.violated.begin(), c3.violated.end(), "writing_tone") != c3.violated.end());
    }
    for (const auto& item : items) CHECK(validate_bench_item(item).empty());
  }

  TEST_CASE("statistics and percentages") {
    CHECK(percent_2dp(1, 3) == "33.33");
    CHECK(percent_2dp(2, 3) == "66.67");
    CHECK(percent_2dp(1, 8) == "12.50");
    CHECK(percent_2dp(1, 800) == "0.13");  // 0.125 rounds half up
    CHECK(percent_2dp(0, 0) == "0.00");
    CHECK(percent_2dp(5, 5) == "100.00");
    BenchItem a, b;
    a.complexity = 2;
    b.complexity = 3;
    b.label = Verdict::unsat;
    b.constraints = {three()[2]};
    b.violated = {"even_odd_word_count"};
    const auto s = compute_stats({a, b});
    CHECK(s.total == 2);
    CHECK(s.sat_percent == "50.00");
    CHECK(s.violations_by_taxonomy.at("even_odd_word_count") == 1);
  }

  TEST_CASE("override files") {
    const auto path = fs::temp_directory_path() / "nsvif_overrides.json";
    write_text_file(path, R"({"c3_001": ["writing_tone"], "c4_002": []})");
    const auto o = load_semantic_overrides(path);
    CHECK(o.at("c3_001") == std::set<std::string>{"writing_tone"});
    fs::remove(path);
  }

  TEST_CASE("gateway generator asks for revisions") {
    std::vector<std::string> users;
    auto backend = std::make_shared<CallbackBackend>([&](const ChatRequest& r) {
      users.push_back(r.user);
      return ChatResponse{"text", {}, BackendKind::live};
    });
    GatewayOutputGenerator gen(std::make_shared<Gateway>(GatewayMode::live, backend), "m");
    GenerationRequest r;
    r.instruction = "Write.";
    gen.generate(r);
    r.attempt = 1;
    r.previous_output = "old";
    r.feedback = "- a: missing\n";
    gen.generate(r);
    CHECK(users[0] == "Write.");
    CHECK(users[1].find("old") != std::string::npos);
    CHECK(users[1].find("- a: missing") != std::string::npos);
  }
}
