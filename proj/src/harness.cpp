#include "nsvif/harness.hpp"

#include <atomic>
#include <numeric>
#include <thread>

#include "nsvif/error.hpp"

namespace nsvif {

Ratio Ratio::of(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) throw ValidationError("ratio needs num >= 0 and den > 0");
  const std::int64_t g = std::gcd(num, den);
  return Ratio{num / g, den / g};
}

std::string format_ratio(const std::optional<Ratio>& ratio, int decimals) {
  if (!ratio) return "n/a";
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  // round(num * scale / den) with halves going up
  const std::int64_t scaled = (ratio->num * scale * 2 + ratio->den) / (ratio->den * 2);
  std::string frac = std::to_string(scaled % scale);
  if (frac.size() < static_cast<std::size_t>(decimals)) frac.insert(0, decimals - frac.size(), '0');
  return std::to_string(scaled / scale) + (decimals > 0 ? "." + frac : "");
}

Metrics compute_metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn, std::size_t errored) {
  Metrics m{tp, fp, fn, tn, errored, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  const auto i = [](std::size_t v) { return static_cast<std::int64_t>(v); };
  if (tp + fp > 0) m.precision = Ratio::of(i(tp), i(tp + fp));
  if (tp + fn > 0) m.recall = Ratio::of(i(tp), i(tp + fn));
  // 2PR/(P+R) reduces to 2tp/(2tp+fp+fn) when both are defined and P+R > 0.
  if (m.precision && m.recall && tp > 0) m.f1 = Ratio::of(2 * i(tp), 2 * i(tp) + i(fp) + i(fn));
  if (m.scored() > 0) m.pass_at_1 = Ratio::of(i(tp + tn), i(m.scored()));
  return m;
}

Metrics metrics_from_predictions(const std::vector<Prediction>& predictions) {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0, errored = 0;
  for (const auto& p : predictions) {
    if (!p.predicted) {
      ++errored;
      continue;
    }
    const bool said_sat = *p.predicted == Verdict::sat;
    const bool is_sat = p.truth == Verdict::sat;
    if (said_sat && is_sat) ++tp;
    if (said_sat && !is_sat) ++fp;
    if (!said_sat && is_sat) ++fn;
    if (!said_sat && !is_sat) ++tn;
  }
  return compute_metrics(tp, fp, fn, tn, errored);
}

std::map<int, Metrics> breakdown_by_complexity(const std::vector<Prediction>& predictions) {
  std::map<int, std::vector<Prediction>> groups;
  for (const auto& p : predictions) groups[p.complexity].push_back(p);
  std::map<int, Metrics> out;
  for (const auto& [c, preds] : groups) out[c] = metrics_from_predictions(preds);
  return out;
}

EvalResult evaluate_verifier(const VerifierFn& verifier, const std::vector<BenchItem>& dataset, int workers) {
  EvalResult result;
  result.predictions.resize(dataset.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < dataset.size(); i = next++) {
      const BenchItem& item = dataset[i];
      Prediction p;
      p.id = item.id;
      p.complexity = item.complexity;
      p.truth = item.label;
      try {
        p.predicted = verifier(item);
      } catch (const std::exception& e) {
        p.error = e.what();
      }
      result.predictions[i] = std::move(p);
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(1, dataset.size()))));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  result.metrics = metrics_from_predictions(result.predictions);
  result.by_complexity = breakdown_by_complexity(result.predictions);
  return result;
}

namespace {

json ratio_json(const std::optional<Ratio>& r) {
  if (!r) return nullptr;
  return json{{"num", r->num}, {"den", r->den}, {"value", r->value()}, {"display", format_ratio(r)}};
}

}  // namespace

json metrics_to_json(const Metrics& m) {
  return json{{"tp", m.tp},
              {"fp", m.fp},
              {"fn", m.fn},
              {"tn", m.tn},
              {"errored", m.errored},
              {"precision", ratio_json(m.precision)},
              {"recall", ratio_json(m.recall)},
              {"f1", ratio_json(m.f1)},
              {"pass_at_1", ratio_json(m.pass_at_1)}};
}

json eval_result_to_json(const EvalResult& r) {
  json by = json::object();
  for (const auto& [c, m] : r.by_complexity) by[std::to_string(c)] = metrics_to_json(m);
  json errors = json::array();
  for (const auto& p : r.predictions) {
    if (!p.predicted) errors.push_back(json{{"id", p.id}, {"error", p.error}});
  }
  return json{{"overall", metrics_to_json(r.metrics)}, {"by_complexity", by}, {"errors", errors}};
}

std::string predictions_to_jsonl(const std::vector<Prediction>& predictions) {
  std::string out;
  for (const auto& p : predictions) {
    json j{{"id", p.id},
           {"predicted", p.predicted ? json(std::string(to_string(*p.predicted))) : json(nullptr)},
           {"truth", std::string(to_string(p.truth))},
           {"errored", !p.predicted.has_value()}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace nsvif
