#pragma once

// Runs a verifier over a labeled dataset and scores it with "sat" as the
// positive class.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsvif/json_io.hpp"
#include "nsvif/model.hpp"

namespace nsvif {

/// Exact non-negative fraction in lowest terms.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Ratio of(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Fixed-point text with `decimals` digits, rounding half up; "n/a" when absent.
std::string format_ratio(const std::optional<Ratio>& ratio, int decimals = 3);

struct Metrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t errored = 0;
  /// Absent whenever the denominator is zero.
  std::optional<Ratio> precision;
  std::optional<Ratio> recall;
  std::optional<Ratio> f1;
  std::optional<Ratio> pass_at_1;

  std::size_t scored() const { return tp + fp + fn + tn; }
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

Metrics compute_metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn, std::size_t errored = 0);

struct Prediction {
  std::string id;
  int complexity = 0;
  Verdict truth = Verdict::sat;
  std::optional<Verdict> predicted;  // empty when the verifier failed
  std::string error;
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

Metrics metrics_from_predictions(const std::vector<Prediction>& predictions);

/// Complexity -> metrics over that complexity's items; groups with no items
/// are absent.
std::map<int, Metrics> breakdown_by_complexity(const std::vector<Prediction>& predictions);

using VerifierFn = std::function<Verdict(const BenchItem&)>;

struct EvalResult {
  Metrics metrics;
  std::map<int, Metrics> by_complexity;
  std::vector<Prediction> predictions;  // dataset order
};

/// Calls `verifier` once per item on up to `workers` threads. An exception
/// marks the item errored; it is counted but not scored.
EvalResult evaluate_verifier(const VerifierFn& verifier, const std::vector<BenchItem>& dataset, int workers = 1);

json metrics_to_json(const Metrics& metrics);
json eval_result_to_json(const EvalResult& result);
/// {id, predicted, truth, errored} per line; `predicted` is null when errored.
std::string predictions_to_jsonl(const std::vector<Prediction>& predictions);

}  // namespace nsvif
