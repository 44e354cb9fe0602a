#pragma once

// JSON schemas for the data model. Formulas travel as DSL strings.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsvif/model.hpp"

namespace nsvif {

using json = nlohmann::json;

void to_json(json& j, const Constraint& c);
void from_json(const json& j, Constraint& c);

void to_json(json& j, const CheckResult& r);
void from_json(const json& j, CheckResult& r);

void to_json(json& j, const TokenUsage& u);
void from_json(const json& j, TokenUsage& u);

void to_json(json& j, const VerificationReport& r);
void from_json(const json& j, VerificationReport& r);

void to_json(json& j, const BenchItem& item);
void from_json(const json& j, BenchItem& item);

/// Pretty-printed (2-space indent) with sorted keys and a trailing newline.
std::string dump_pretty(const json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// One compact JSON object per line, '\n' separated.
std::vector<BenchItem> read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const std::vector<BenchItem>& items);
std::string dataset_to_jsonl(const std::vector<BenchItem>& items);

}  // namespace nsvif
