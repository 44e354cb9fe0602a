#include <doctest.h>

#include <filesystem>

#include "nsvif/synth.hpp"
#include "nsvif/templates.hpp"
#include "nsvif/writer.hpp"

using namespace nsvif;

TEST_SUITE("writer") {
  TEST_CASE("compliant text satisfies every logic constraint of every group") {
    const ValuePools pools = load_pools(std::filesystem::path(NSVIF_SOURCE_DIR) / "data" / "default_pools.json");
    for (const auto& group : default_groups()) {
      for (const auto& inst : synth_group(group, pools, 10)) {
        for (std::uint64_t variant = 0; variant < 3; ++variant) {
          const std::string text = compose_compliant_text(inst.constraints, variant);
          const auto l = label_output(inst.constraints, text);
          CHECK_MESSAGE(l.label == Verdict::sat, inst.text);
        }
      }
    }
  }

  TEST_CASE("violating writer breaks the omitted constraint") {
    const ValuePools pools = load_pools(std::filesystem::path(NSVIF_SOURCE_DIR) / "data" / "default_pools.json");
    TemplateWriter writer(WriterOptions{true});
    for (const auto& group : default_groups()) {
      const auto inst = synth_group(group, pools, 3);
      for (std::uint64_t rot = 0; rot < 3; ++rot) {
        const auto m = mutate_instruction(inst[rot].constraints, rot);
        GenerationRequest r;
        r.instruction = m.text;
        r.shown_constraints = m.constraints;
        r.omitted = m.omitted;
        r.target = Verdict::unsat;
        r.seed = rot;
        const auto l = label_output(inst[rot].constraints, writer.generate(r));
        CHECK(std::find(l.violated.begin(), l.violated.end(), m.omitted.id) != l.violated.end());
      }
    }
  }

  TEST_CASE("output is deterministic") {
    const auto cs = parse_instruction(
        "Please write in this topic: agile\nPlease consider this even/odd word count constraint: the total word count "
        "should be odd, this does not apply to title and subsection title lines.");
    CHECK(compose_compliant_text(cs, 1) == compose_compliant_text(cs, 1));
  }
}
