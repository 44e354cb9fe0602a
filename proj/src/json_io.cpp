#include "nsvif/json_io.hpp"

#include <fstream>
#include <sstream>

#include "nsvif/error.hpp"
#include "nsvif/formula.hpp"

namespace nsvif {

namespace {

json param_to_json(const ParamValue& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

ParamValue param_from_json(const std::string& key, const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::vector<std::string> out;
    for (const auto& e : j) {
      if (!e.is_string()) throw ValidationError("parameter '" + key + "' must be a list of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }
  throw ValidationError("parameter '" + key + "' has unsupported JSON type " + std::string(j.type_name()));
}

}  // namespace

void to_json(json& j, const Constraint& c) {
  json params = json::object();
  for (const auto& [k, v] : c.params) params[k] = param_to_json(v);
  j = json{{"id", c.id},
           {"kind", to_string(c.kind)},
           {"taxonomy", to_string(c.taxonomy)},
           {"params", std::move(params)},
           {"summary", c.summary}};
}

void from_json(const json& j, Constraint& c) {
  c.id = j.at("id").get<std::string>();
  c.kind = parse_constraint_kind(j.at("kind").get<std::string>());
  const auto tax = j.at("taxonomy").get<std::string>();
  auto parsed = parse_taxonomy(tax);
  if (!parsed) throw ValidationError("unknown taxonomy '" + tax + "'");
  c.taxonomy = *parsed;
  c.params.clear();
  if (j.contains("params")) {
    for (const auto& [k, v] : j.at("params").items()) c.params[k] = param_from_json(k, v);
  }
  c.summary = j.value("summary", std::string{});
}

void to_json(json& j, const CheckResult& r) {
  j = json{{"constraint_id", r.constraint_id},
           {"verdict", r.verdict},
           {"method", to_string(r.method)},
           {"evidence", r.evidence},
           {"attempts", r.attempts}};
}

void from_json(const json& j, CheckResult& r) {
  r.constraint_id = j.at("constraint_id").get<std::string>();
  r.verdict = j.at("verdict").get<bool>();
  r.method = parse_check_method(j.at("method").get<std::string>());
  r.evidence = j.value("evidence", std::string{});
  r.attempts = j.value("attempts", 1);
}

void to_json(json& j, const TokenUsage& u) {
  j = json{{"input_tokens", u.input_tokens}, {"output_tokens", u.output_tokens}};
}

void from_json(const json& j, TokenUsage& u) {
  u.input_tokens = j.value("input_tokens", std::int64_t{0});
  u.output_tokens = j.value("output_tokens", std::int64_t{0});
}

void to_json(json& j, const VerificationReport& r) {
  j = json{{"overall", to_string(r.overall)},
           {"formula", print_formula(r.formula)},
           {"assignment", r.assignment},
           {"results", r.results},
           {"violated", r.violated},
           {"explanation", r.explanation},
           {"usage", r.usage},
           {"constraints", r.constraints}};
}

void from_json(const json& j, VerificationReport& r) {
  r.overall = parse_verdict(j.at("overall").get<std::string>());
  r.formula = parse_formula(j.at("formula").get<std::string>());
  r.assignment = j.at("assignment").get<Assignment>();
  r.results = j.at("results").get<std::vector<CheckResult>>();
  r.violated = j.at("violated").get<std::vector<std::string>>();
  r.explanation = j.value("explanation", std::string{});
  r.usage = j.value("usage", TokenUsage{});
  r.constraints = j.value("constraints", std::vector<Constraint>{});
}

void to_json(json& j, const BenchItem& item) {
  j = json{{"id", item.id},
           {"complexity", item.complexity},
           {"instruction", item.instruction},
           {"constraints", item.constraints},
           {"formula", print_formula(item.formula)},
           {"output", item.output},
           {"label", to_string(item.label)},
           {"violated", item.violated}};
}

void from_json(const json& j, BenchItem& item) {
  item.id = j.at("id").get<std::string>();
  item.complexity = j.at("complexity").get<int>();
  item.instruction = j.at("instruction").get<std::string>();
  item.constraints = j.at("constraints").get<std::vector<Constraint>>();
  item.formula = parse_formula(j.at("formula").get<std::string>());
  item.output = j.at("output").get<std::string>();
  item.label = parse_verdict(j.at("label").get<std::string>());
  item.violated = j.at("violated").get<std::vector<std::string>>();
}

std::string dump_pretty(const json& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("short write to " + path.string());
}

std::vector<BenchItem> read_dataset(const std::filesystem::path& path) {
  std::vector<BenchItem> items;
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      items.push_back(json::parse(line).get<BenchItem>());
    } catch (const std::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return items;
}

std::string dataset_to_jsonl(const std::vector<BenchItem>& items) {
  std::string out;
  for (const auto& item : items) {
    out += json(item).dump();
    out.push_back('\n');
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const std::vector<BenchItem>& items) {
  write_text_file(path, dataset_to_jsonl(items));
}

}  // namespace nsvif
