#include "t2ploc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>

#include "t2ploc/error.hpp"

namespace t2p {

double recall_at(std::span<const double> errors, double k) {
  if (errors.empty()) throw Error(ErrorCode::UndefinedMetric, "recall over zero queries");
  if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "recall threshold must be positive", "eval.recall_k");
  const auto hits = std::count_if(errors.begin(), errors.end(), [k](double e) { return e <= k; });
  return static_cast<double>(hits) / static_cast<double>(errors.size());
}

AssignmentScore assignment_accuracy(std::span<const Assignment> pred, std::span<const Assignment> gt) {
  AssignmentScore s;
  s.arity_violation = pred.size() != gt.size();
  s.per_hint.assign(gt.size(), false);
  for (std::size_t i = 0; i < gt.size() && i < pred.size(); ++i) {
    const bool ok = pred[i].grounded() == gt[i].grounded() &&
                    (!gt[i].grounded() || pred[i].matched_node == gt[i].matched_node);
    s.per_hint[i] = ok;
    s.correct += ok;
  }
  return s;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::UndefinedMetric, "quantile of an empty group");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || sorted[lo] == sorted[hi]) return sorted[lo];
  if (std::isinf(sorted[hi])) return sorted[hi];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<ErrorBucket> error_buckets(std::span<const QueryOutcome> outcomes, int max_correct) {
  std::vector<std::vector<double>> groups(static_cast<std::size_t>(std::max(max_correct, 0) + 1));
  for (const auto& o : outcomes) {
    const int c = std::clamp(o.correct, 0, max_correct);
    groups[static_cast<std::size_t>(c)].push_back(o.error_m);
  }
  std::vector<ErrorBucket> out;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    auto& g = groups[c];
    ErrorBucket b;
    b.correct = static_cast<int>(c);
    b.n = g.size();
    if (!g.empty()) {
      std::sort(g.begin(), g.end());
      b.q1 = quantile_sorted(g, 0.25);
      b.median = quantile_sorted(g, 0.5);
      b.q3 = quantile_sorted(g, 0.75);
    }
    out.push_back(b);
  }
  return out;
}

EvalReport evaluate(std::span<const Query> queries, std::span<const LocalizationResult> predictions,
                    std::span<const double> ks) {
  std::unordered_map<std::string, const Query*> by_id;
  for (const auto& q : queries) {
    if (!by_id.emplace(q.query_id, &q).second) {
      throw Error(ErrorCode::Integrity, "duplicate query id " + q.query_id);
    }
  }
  std::unordered_map<std::string, const LocalizationResult*> preds;
  for (const auto& p : predictions) {
    if (!by_id.count(p.query_id)) throw Error(ErrorCode::Integrity, "prediction for unknown query " + p.query_id);
    if (!preds.emplace(p.query_id, &p).second) {
      throw Error(ErrorCode::Integrity, "duplicate prediction for query " + p.query_id);
    }
  }

  EvalReport report;
  report.n_queries = queries.size();
  int max_hints = 0;
  std::size_t hints_total = 0, hints_correct = 0;
  for (const auto& q : queries) {
    QueryOutcome o;
    o.query_id = q.query_id;
    o.hints = static_cast<int>(q.gt_assignments.size());
    max_hints = std::max(max_hints, o.hints);
    const auto it = preds.find(q.query_id);
    const LocalizationResult* p = it == preds.end() ? nullptr : it->second;
    o.failed = !p || !p->ok;
    o.error_m = o.failed ? std::numeric_limits<double>::infinity() : distance(p->predicted_world, q.xi);
    const auto score = assignment_accuracy(p ? std::span<const Assignment>(p->assignments)
                                             : std::span<const Assignment>(),
                                           q.gt_assignments);
    o.correct = score.correct;
    o.arity_violation = p && score.arity_violation;
    hints_total += q.gt_assignments.size();
    hints_correct += static_cast<std::size_t>(score.correct);
    report.failed += o.failed;
    report.arity_violations += o.arity_violation;
    ++report.correct_histogram[o.correct];
    report.per_query.push_back(std::move(o));
  }
  std::sort(report.per_query.begin(), report.per_query.end(),
            [](const QueryOutcome& a, const QueryOutcome& b) { return a.query_id < b.query_id; });

  std::vector<double> errors;
  for (const auto& o : report.per_query) errors.push_back(o.error_m);
  for (double k : ks) report.recall[k] = recall_at(errors, k);
  report.hint_accuracy = hints_total ? static_cast<double>(hints_correct) / hints_total : 0.0;
  report.buckets = error_buckets(report.per_query, max_hints);
  return report;
}

namespace {

nlohmann::json number_or_inf(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf");
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? number_or_inf(*v) : nlohmann::json();
}

std::string fmt_double(double v) {
  if (!std::isfinite(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string k_key(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", k);
  return buf;
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json recall = nlohmann::json::object();
  for (const auto& [k, v] : report.recall) recall[k_key(k)] = v;
  auto per_query = nlohmann::json::array();
  for (const auto& o : report.per_query) {
    per_query.push_back({{"query_id", o.query_id},
                         {"error_m", number_or_inf(o.error_m)},
                         {"correct_nodes", o.correct},
                         {"hints", o.hints},
                         {"failed", o.failed},
                         {"arity_violation", o.arity_violation}});
  }
  nlohmann::json histogram = nlohmann::json::object();
  for (const auto& [c, n] : report.correct_histogram) histogram[std::to_string(c)] = n;
  auto buckets = nlohmann::json::array();
  for (const auto& b : report.buckets) {
    buckets.push_back({{"correct_nodes", b.correct},
                       {"n", b.n},
                       {"median", optional_number(b.median)},
                       {"q1", optional_number(b.q1)},
                       {"q3", optional_number(b.q3)}});
  }
  return {{"n_queries", report.n_queries},
          {"recall", recall},
          {"per_query", per_query},
          {"assignment",
           {{"hint_accuracy", report.hint_accuracy},
            {"correct_histogram", histogram},
            {"arity_violations", report.arity_violations}}},
          {"failed", report.failed},
          {"buckets", buckets}};
}

std::string report_csv(const EvalReport& report) {
  std::string out = "query_id,error_m,correct_nodes\n";
  for (const auto& o : report.per_query) {
    out += o.query_id + "," + fmt_double(o.error_m) + "," + std::to_string(o.correct) + "\n";
  }
  return out;
}

std::string buckets_csv(const EvalReport& report) {
  std::string out = "correct_nodes,n,median,q1,q3\n";
  for (const auto& b : report.buckets) {
    auto cell = [](const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); };
    out += std::to_string(b.correct) + "," + std::to_string(b.n) + "," + cell(b.median) + "," +
           cell(b.q1) + "," + cell(b.q3) + "\n";
  }
  return out;
}

}  // namespace t2p
