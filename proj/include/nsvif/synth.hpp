#pragma once

// Benchmark synthesis: value pools, complexity groups, Cartesian enumeration
// of instructions, sat/unsat output generation with instruction mutation,
// logic labeling and dataset statistics.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nsvif/gateway.hpp"
#include "nsvif/model.hpp"

namespace nsvif {

/// Keyword, title and subsection constraints travel together with a topic.
struct TopicGroup {
  std::string topic;
  std::vector<std::string> keywords_include;
  std::vector<std::string> keywords_exclude;
  std::string title;
  std::vector<std::string> subsection_titles;
};

struct ValuePools {
  std::vector<TopicGroup> topics;
  std::vector<std::string> tones;
  std::vector<std::int64_t> word_count_targets;
  std::int64_t word_count_tolerance = 10;
  std::vector<std::string> parities;
  std::vector<std::int64_t> sentence_limits;
  bool sentence_limit_strict = true;
  /// Whether the two bookend constraints are offered at all.
  bool response_bookend = true;
  bool subsection_bookend = true;
};

ValuePools load_pools(const std::filesystem::path& path);
ValuePools pools_from_json_text(const std::string& text);
std::string pools_to_json_text(const ValuePools& pools);

struct ComplexityGroup {
  int complexity = 0;
  std::size_t size = 0;
  std::vector<Taxonomy> constraint_types;
};

/// The nine benchmark groups, C = 2..10.
std::vector<ComplexityGroup> default_groups();

struct SynthInstruction {
  std::vector<Constraint> constraints;  // rendering order
  Formula formula;
  std::string text;
};

/// Size of the Cartesian product for a group. Topic-grouped types share one
/// dimension; each other type contributes one dimension.
std::size_t combination_count(const ComplexityGroup& group, const ValuePools& pools);

/// The first min(cap, group.size, product) combinations in product order
/// (earlier dimensions vary slowest). Throws ParamError on an empty pool.
std::vector<SynthInstruction> synth_group(const ComplexityGroup& group, const ValuePools& pools,
                                          std::size_t cap = 100);

struct MutatedInstruction {
  std::vector<Constraint> constraints;
  Constraint omitted;
  std::string text;
};

/// Drops the logic constraint at position `rotation % n` among the n logic
/// constraints. Throws ParamError when there is none.
MutatedInstruction mutate_instruction(const std::vector<Constraint>& constraints, std::uint64_t rotation);

struct Labeling {
  Verdict label = Verdict::sat;
  std::vector<std::string> violated;
  /// Checker evidence for each violated logic constraint, by id.
  std::map<std::string, std::string> evidence;
};

/// Runs every logic constraint's builtin checker. Semantic constraints count
/// as satisfied unless listed in `semantic_violations`.
Labeling label_output(const std::vector<Constraint>& constraints, std::string_view output,
                      const std::set<std::string>& semantic_violations = {});

struct GenerationRequest {
  std::string instruction;  // what a language model would be shown
  std::string feedback;     // checker messages from the previous attempt, if any
  std::string previous_output;
  int attempt = 0;          // 0 for the first generation
  /// Metadata for scripted generators; a model-backed generator ignores it.
  Verdict target = Verdict::sat;
  std::vector<Constraint> shown_constraints;
  std::optional<Constraint> omitted;
  std::uint64_t seed = 0;
};

class OutputGenerator {
 public:
  virtual ~OutputGenerator() = default;
  virtual std::string generate(const GenerationRequest& request) = 0;
};

/// Asks a model through the gateway; revisions quote the previous output and
/// the checker messages.
class GatewayOutputGenerator : public OutputGenerator {
 public:
  GatewayOutputGenerator(std::shared_ptr<Gateway> gateway, std::string model,
                         double temperature = kDefaultTemperature);
  std::string generate(const GenerationRequest& request) override;

 private:
  std::shared_ptr<Gateway> gateway_;
  std::string model_;
  double temperature_;
};

inline constexpr int kDefaultRegenerationBudget = 5;

/// One benchmark item. Sat rounds revise against checker messages until every
/// logic checker passes; unsat rounds write against a mutated instruction
/// until some logic checker fails. Each round allows `budget` regenerations
/// after the first output, then keeps the last output. The label always comes
/// from label_output on the original constraints.
BenchItem generate_labeled_output(const std::string& id, int complexity, const SynthInstruction& instruction,
                                  OutputGenerator& generator, Verdict target, std::uint64_t rotation,
                                  int budget = kDefaultRegenerationBudget);

struct SynthOptions {
  std::uint64_t seed = 0;
  std::size_t cap = 100;
  int budget = kDefaultRegenerationBudget;
  /// Item id -> semantic constraint ids judged violated on review.
  std::map<std::string, std::set<std::string>> semantic_overrides;
};

/// All groups in order; targets alternate sat/unsat within each group,
/// starting with sat. Item ids are "c<C>_<index>" with a 3-digit index.
std::vector<BenchItem> build_dataset(const std::vector<ComplexityGroup>& groups, const ValuePools& pools,
                                     OutputGenerator& generator, const SynthOptions& options);

/// Re-applies review overrides: listed semantic ids join `violated`, and the
/// label becomes unsat.
void apply_semantic_overrides(BenchItem& item, const std::set<std::string>& semantic_violations);

std::map<std::string, std::set<std::string>> load_semantic_overrides(const std::filesystem::path& path);

struct DatasetStats {
  std::size_t total = 0;
  std::size_t sat = 0;
  std::size_t unsat = 0;
  std::string sat_percent;    // two decimals, half-up
  std::string unsat_percent;
  std::map<int, std::size_t> per_complexity;
  std::map<std::string, std::size_t> violations_by_taxonomy;
};

DatasetStats compute_stats(const std::vector<BenchItem>& items);

/// 100 * part / whole with two decimals, rounding half up; "0.00" for an
/// empty whole.
std::string percent_2dp(std::size_t part, std::size_t whole);

}  // namespace nsvif
