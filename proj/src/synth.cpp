#include "nsvif/synth.hpp"

#include <algorithm>

#include "nsvif/checkers.hpp"
#include "nsvif/error.hpp"
#include "nsvif/json_io.hpp"
#include "nsvif/templates.hpp"

namespace nsvif {

namespace {

bool topic_grouped(Taxonomy t) {
  switch (t) {
    case Taxonomy::writing_topic:
    case Taxonomy::keyword_inclusion:
    case Taxonomy::keyword_exclusion:
    case Taxonomy::response_title:
    case Taxonomy::subsection_titles:
      return true;
    default:
      return false;
  }
}

// One product dimension: either the topic group, or a single taxonomy.
struct Dimension {
  bool topic = false;
  Taxonomy taxonomy = Taxonomy::custom;
  std::size_t size = 0;
};

std::size_t pool_size(Taxonomy t, const ValuePools& pools) {
  switch (t) {
    case Taxonomy::writing_tone: return pools.tones.size();
    case Taxonomy::word_count: return pools.word_count_targets.size();
    case Taxonomy::words_per_sentence: return pools.sentence_limits.size();
    case Taxonomy::even_odd_word_count: return pools.parities.size();
    case Taxonomy::response_bookend: return pools.response_bookend ? 1 : 0;
    case Taxonomy::subsection_bookend: return pools.subsection_bookend ? 1 : 0;
    default: break;
  }
  throw ParamError("taxonomy " + std::string(to_string(t)) + " has no value pool");
}

std::vector<Dimension> dimensions(const ComplexityGroup& group, const ValuePools& pools) {
  std::vector<Dimension> dims;
  std::set<Taxonomy> seen;
  bool have_topic = false;
  for (Taxonomy t : group.constraint_types) {
    if (!seen.insert(t).second) {
      throw ParamError("constraint type " + std::string(to_string(t)) + " appears twice in group C=" +
                       std::to_string(group.complexity));
    }
    if (topic_grouped(t)) {
      if (pools.topics.empty()) throw ParamError("topic pool is empty");
      if (!have_topic) dims.push_back(Dimension{true, Taxonomy::writing_topic, pools.topics.size()});
      have_topic = true;
      continue;
    }
    std::size_t n = pool_size(t, pools);
    if (n == 0) throw ParamError("value pool for " + std::string(to_string(t)) + " is empty");
    dims.push_back(Dimension{false, t, n});
  }
  return dims;
}

Params params_for(Taxonomy t, const TopicGroup& topic, std::size_t choice, const ValuePools& pools) {
  switch (t) {
    case Taxonomy::writing_topic: return {{"topic", topic.topic}};
    case Taxonomy::keyword_inclusion: return {{"keywords", topic.keywords_include}};
    case Taxonomy::keyword_exclusion: return {{"keywords", topic.keywords_exclude}};
    case Taxonomy::response_title: return {{"title", topic.title}};
    case Taxonomy::subsection_titles: return {{"titles", topic.subsection_titles}};
    case Taxonomy::writing_tone: return {{"tone", pools.tones.at(choice)}};
    case Taxonomy::word_count:
      return {{"target", pools.word_count_targets.at(choice)}, {"tolerance", pools.word_count_tolerance}};
    case Taxonomy::words_per_sentence:
      return {{"max_words", pools.sentence_limits.at(choice)}, {"strict", pools.sentence_limit_strict}};
    case Taxonomy::even_odd_word_count: return {{"parity", pools.parities.at(choice)}};
    case Taxonomy::response_bookend:
    case Taxonomy::subsection_bookend: return {};
    case Taxonomy::custom: break;
  }
  throw ParamError("custom constraints cannot be synthesized");
}

std::vector<std::string> string_list(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<std::string>>();
}

}  // namespace

ValuePools pools_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  ValuePools p;
  for (const auto& t : j.at("topics")) {
    TopicGroup g;
    g.topic = t.at("topic").get<std::string>();
    g.keywords_include = string_list(t, "keywords_include");
    g.keywords_exclude = string_list(t, "keywords_exclude");
    g.title = t.value("title", std::string());
    g.subsection_titles = string_list(t, "subsection_titles");
    if (g.topic.empty() || g.keywords_include.empty() || g.keywords_exclude.empty() || g.title.empty() ||
        g.subsection_titles.empty()) {
      throw ValidationError("topic group '" + g.topic +
                            "' must carry keywords_include, keywords_exclude, title and subsection_titles");
    }
    p.topics.push_back(std::move(g));
  }
  p.tones = string_list(j, "tones");
  if (j.contains("word_count_targets")) p.word_count_targets = j.at("word_count_targets").get<std::vector<std::int64_t>>();
  p.word_count_tolerance = j.value("word_count_tolerance", std::int64_t{10});
  p.parities = string_list(j, "parities");
  if (j.contains("sentence_limits")) p.sentence_limits = j.at("sentence_limits").get<std::vector<std::int64_t>>();
  p.sentence_limit_strict = j.value("sentence_limit_strict", true);
  p.response_bookend = j.value("response_bookend", true);
  p.subsection_bookend = j.value("subsection_bookend", true);
  for (const auto& parity : p.parities) {
    if (parity != "even" && parity != "odd") throw ValidationError("parity pool values must be even or odd");
  }
  return p;
}

ValuePools load_pools(const std::filesystem::path& path) {
  try {
    return pools_from_json_text(read_text_file(path));
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string pools_to_json_text(const ValuePools& p) {
  json topics = json::array();
  for (const auto& g : p.topics) {
    topics.push_back(json{{"topic", g.topic},
                          {"keywords_include", g.keywords_include},
                          {"keywords_exclude", g.keywords_exclude},
                          {"title", g.title},
                          {"subsection_titles", g.subsection_titles}});
  }
  json j{{"topics", topics},
         {"tones", p.tones},
         {"word_count_targets", p.word_count_targets},
         {"word_count_tolerance", p.word_count_tolerance},
         {"parities", p.parities},
         {"sentence_limits", p.sentence_limits},
         {"sentence_limit_strict", p.sentence_limit_strict},
         {"response_bookend", p.response_bookend},
         {"subsection_bookend", p.subsection_bookend}};
  return dump_pretty(j);
}

std::vector<ComplexityGroup> default_groups() {
  using T = Taxonomy;
  // Columns A..K of the group table, in column order.
  const std::vector<T> columns = {T::writing_topic,      T::word_count,          T::writing_tone,
                                  T::keyword_inclusion,  T::keyword_exclusion,   T::response_title,
                                  T::subsection_titles,  T::words_per_sentence,  T::even_odd_word_count,
                                  T::response_bookend,   T::subsection_bookend};
  const std::vector<std::pair<int, std::string>> rows = {
      {2, "AB"},    {3, "ABC"},     {4, "ABCD"},     {5, "ACDEF"},     {6, "ACDEFG"},
      {7, "ACDEFGH"}, {8, "ACDEFGHI"}, {9, "ACDEFGHIJ"}, {10, "ACDEFGHIJK"},
  };
  std::vector<ComplexityGroup> groups;
  for (const auto& [c, letters] : rows) {
    ComplexityGroup g;
    g.complexity = c;
    g.size = (c == 5 || c == 6) ? 60 : 100;
    for (char letter : letters) g.constraint_types.push_back(columns.at(static_cast<std::size_t>(letter - 'A')));
    groups.push_back(std::move(g));
  }
  return groups;
}

std::size_t combination_count(const ComplexityGroup& group, const ValuePools& pools) {
  std::size_t n = 1;
  for (const auto& d : dimensions(group, pools)) n *= d.size;
  return n;
}

std::vector<SynthInstruction> synth_group(const ComplexityGroup& group, const ValuePools& pools, std::size_t cap) {
  if (group.constraint_types.size() != static_cast<std::size_t>(group.complexity)) {
    throw ParamError("group C=" + std::to_string(group.complexity) + " lists " +
                     std::to_string(group.constraint_types.size()) + " constraint types");
  }
  const auto dims = dimensions(group, pools);
  std::size_t total = 1;
  for (const auto& d : dims) total *= d.size;
  const std::size_t keep = std::min({cap, group.size, total});

  std::vector<Taxonomy> ordered = group.constraint_types;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](Taxonomy a, Taxonomy b) { return render_rank(a) < render_rank(b); });

  std::vector<SynthInstruction> out;
  out.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    // Mixed-radix decode with the last dimension varying fastest.
    std::vector<std::size_t> choice(dims.size());
    std::size_t rest = k;
    for (std::size_t d = dims.size(); d-- > 0;) {
      choice[d] = rest % dims[d].size;
      rest /= dims[d].size;
    }
    std::size_t topic_choice = 0;
    std::map<Taxonomy, std::size_t> value_choice;
    for (std::size_t d = 0; d < dims.size(); ++d) {
      if (dims[d].topic) {
        topic_choice = choice[d];
      } else {
        value_choice[dims[d].taxonomy] = choice[d];
      }
    }
    const TopicGroup& topic = pools.topics.empty() ? TopicGroup{} : pools.topics.at(topic_choice);

    SynthInstruction item;
    std::set<std::string> taken;
    std::vector<std::string> ids;
    for (Taxonomy t : ordered) {
      Constraint c = make_constraint(t, params_for(t, topic, value_choice[t], pools), taken);
      taken.insert(c.id);
      ids.push_back(c.id);
      item.constraints.push_back(std::move(c));
    }
    item.formula = Formula::all_of(ids);
    item.text = render_instruction(item.constraints);
    out.push_back(std::move(item));
  }
  return out;
}

MutatedInstruction mutate_instruction(const std::vector<Constraint>& constraints, std::uint64_t rotation) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (constraints[i].kind == ConstraintKind::logic) eligible.push_back(i);
  }
  if (eligible.empty()) throw ParamError("instruction has no logic constraint to omit");
  const std::size_t drop = eligible[rotation % eligible.size()];
  MutatedInstruction m;
  m.omitted = constraints[drop];
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (i != drop) m.constraints.push_back(constraints[i]);
  }
  // An instruction with only the dropped constraint still renders its header.
  m.text = m.constraints.empty() ? std::string(kInstructionHeader) : render_instruction(m.constraints);
  return m;
}

GatewayOutputGenerator::GatewayOutputGenerator(std::shared_ptr<Gateway> gateway, std::string model, double temperature)
    : gateway_(std::move(gateway)), model_(std::move(model)), temperature_(temperature) {}

std::string GatewayOutputGenerator::generate(const GenerationRequest& request) {
  ChatRequest chat;
  chat.model = model_;
  chat.temperature = temperature_;
  chat.user = request.instruction;
  if (request.attempt > 0) {
    chat.user += "\n\nYour previous response:\n" + request.previous_output;
    if (!request.feedback.empty()) {
      chat.user += "\n\nIt failed these checks:\n" + request.feedback +
                   "Revise the response so that it passes every check.";
    } else {
      chat.user += "\n\nWrite a new response to the instruction.";
    }
    // Keeps repeated rounds from collapsing onto one cassette entry.
    chat.user += "\n(attempt " + std::to_string(request.attempt + 1) + ")";
  }
  return gateway_->complete(chat).text;
}

Labeling label_output(const std::vector<Constraint>& constraints, std::string_view output,
                      const std::set<std::string>& semantic_violations) {
  Labeling l;
  for (const auto& c : constraints) {
    if (c.kind == ConstraintKind::logic) {
      CheckResult r = run_builtin(c, output);
      if (!r.verdict) {
        l.violated.push_back(c.id);
        l.evidence[c.id] = r.evidence;
      }
    } else if (semantic_violations.contains(c.id)) {
      l.violated.push_back(c.id);
    }
  }
  l.label = l.violated.empty() ? Verdict::sat : Verdict::unsat;
  return l;
}

BenchItem generate_labeled_output(const std::string& id, int complexity, const SynthInstruction& instruction,
                                  OutputGenerator& generator, Verdict target, std::uint64_t rotation, int budget) {
  GenerationRequest request;
  request.target = target;
  request.seed = rotation;
  if (target == Verdict::sat) {
    request.instruction = instruction.text;
    request.shown_constraints = instruction.constraints;
  } else {
    MutatedInstruction m = mutate_instruction(instruction.constraints, rotation);
    request.instruction = m.text;
    request.shown_constraints = m.constraints;
    request.omitted = m.omitted;
  }

  std::string output = generator.generate(request);
  Labeling labeling = label_output(instruction.constraints, output);
  for (int round = 1; round <= budget && labeling.label != target; ++round) {
    request.attempt = round;
    request.previous_output = output;
    request.feedback.clear();
    if (target == Verdict::sat) {
      for (const auto& v : labeling.violated) request.feedback += "- " + v + ": " + labeling.evidence[v] + "\n";
    }
    output = generator.generate(request);
    labeling = label_output(instruction.constraints, output);
  }

  BenchItem item;
  item.id = id;
  item.complexity = complexity;
  item.instruction = instruction.text;
  item.constraints = instruction.constraints;
  item.formula = instruction.formula;
  item.output = std::move(output);
  item.label = labeling.label;
  item.violated = std::move(labeling.violated);
  return item;
}

void apply_semantic_overrides(BenchItem& item, const std::set<std::string>& semantic_violations) {
  if (semantic_violations.empty()) return;
  std::vector<std::string> violated;
  for (const auto& c : item.constraints) {
    const bool listed = std::find(item.violated.begin(), item.violated.end(), c.id) != item.violated.end();
    const bool reviewed = c.kind == ConstraintKind::semantic && semantic_violations.contains(c.id);
    if (listed || reviewed) violated.push_back(c.id);
  }
  item.violated = std::move(violated);
  item.label = item.violated.empty() ? Verdict::sat : Verdict::unsat;
}

std::map<std::string, std::set<std::string>> load_semantic_overrides(const std::filesystem::path& path) {
  std::map<std::string, std::set<std::string>> out;
  const json j = json::parse(read_text_file(path));
  for (const auto& [item_id, ids] : j.items()) {
    for (const auto& cid : ids) out[item_id].insert(cid.get<std::string>());
  }
  return out;
}

std::vector<BenchItem> build_dataset(const std::vector<ComplexityGroup>& groups, const ValuePools& pools,
                                     OutputGenerator& generator, const SynthOptions& options) {
  std::vector<BenchItem> items;
  for (const auto& group : groups) {
    const auto instructions = synth_group(group, pools, options.cap);
    for (std::size_t i = 0; i < instructions.size(); ++i) {
      std::string index = std::to_string(i + 1);
      if (index.size() < 3) index.insert(0, 3 - index.size(), '0');
      const std::string id = "c" + std::to_string(group.complexity) + "_" + index;
      const Verdict target = i % 2 == 0 ? Verdict::sat : Verdict::unsat;
      BenchItem item = generate_labeled_output(id, group.complexity, instructions[i], generator, target,
                                               options.seed + i / 2, options.budget);
      if (auto it = options.semantic_overrides.find(id); it != options.semantic_overrides.end()) {
        apply_semantic_overrides(item, it->second);
      }
      items.push_back(std::move(item));
    }
  }
  return items;
}

std::string percent_2dp(std::size_t part, std::size_t whole) {
  if (whole == 0) return "0.00";
  const unsigned long long hundredths = (static_cast<unsigned long long>(part) * 20000ULL + whole) / (2ULL * whole);
  std::string frac = std::to_string(hundredths % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(hundredths / 100) + "." + frac;
}

DatasetStats compute_stats(const std::vector<BenchItem>& items) {
  DatasetStats s;
  s.total = items.size();
  for (const auto& item : items) {
    (item.label == Verdict::sat ? s.sat : s.unsat) += 1;
    s.per_complexity[item.complexity] += 1;
    for (const auto& v : item.violated) {
      auto c = std::find_if(item.constraints.begin(), item.constraints.end(),
                            [&](const Constraint& x) { return x.id == v; });
      s.violations_by_taxonomy[c == item.constraints.end() ? "unknown" : std::string(to_string(c->taxonomy))] += 1;
    }
  }
  s.sat_percent = percent_2dp(s.sat, s.total);
  s.unsat_percent = percent_2dp(s.unsat, s.total);
  return s;
}

}  // namespace nsvif
