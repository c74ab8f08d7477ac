#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "t2ploc/localization.hpp"
#include "t2ploc/query_gen.hpp"

namespace t2p {

/// Fraction of errors <= k (inclusive). Infinite errors never count.
/// Throws UndefinedMetric for an empty list and InvalidArgument for k <= 0.
double recall_at(std::span<const double> errors, double k);

struct AssignmentScore {
  int correct = 0;
  std::vector<bool> per_hint;   // gt-length
  bool arity_violation = false;  // pred length differed from gt
};

/// Hint i is correct iff groundedness agrees and, when grounded, so does the
/// node. Missing predictions count as wrong; extra ones are ignored.
AssignmentScore assignment_accuracy(std::span<const Assignment> pred, std::span<const Assignment> gt);

/// Linear-interpolation (type 7) quantile of sorted values.
double quantile_sorted(std::span<const double> sorted, double p);

struct ErrorBucket {
  int correct = 0;
  std::size_t n = 0;
  std::optional<double> median, q1, q3;
};

struct QueryOutcome {
  std::string query_id;
  double error_m = 0.0;  // +inf when failed or missing
  int correct = 0;
  int hints = 0;
  bool failed = false;
  bool arity_violation = false;
};

/// Groups by correct-node count 0..max_correct; empty groups have n = 0.
std::vector<ErrorBucket> error_buckets(std::span<const QueryOutcome> outcomes, int max_correct);

struct EvalReport {
  std::size_t n_queries = 0;
  std::map<double, double> recall;  // K meters -> fraction
  std::vector<QueryOutcome> per_query;  // sorted by query id
  double hint_accuracy = 0.0;
  std::size_t failed = 0;
  std::size_t arity_violations = 0;
  std::map<int, std::size_t> correct_histogram;
  std::vector<ErrorBucket> buckets;
};

/// Joins predictions to queries by id. Missing or failed predictions score
/// infinite error. Throws Integrity on duplicate or unknown prediction ids.
EvalReport evaluate(std::span<const Query> queries, std::span<const LocalizationResult> predictions,
                    std::span<const double> ks);

nlohmann::json report_to_json(const EvalReport& report);
std::string report_csv(const EvalReport& report);
std::string buckets_csv(const EvalReport& report);

}  // namespace t2p
