#ifndef FAITHDEBATE_METRICS_HPP
#define FAITHDEBATE_METRICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "faithdebate/domain.hpp"
#include "json.hpp"

namespace faithdebate {

// Positive = "the summary contains a faithfulness error", i.e. the
// Unfaithful label. tp counts predicted-error on gold-error pairs.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(const std::vector<FaithfulnessLabel>& preds,
                          const std::vector<FaithfulnessLabel>& golds);

// FPR = fp/(fp+tn); raises UndefinedRate when no gold-faithful pair exists.
double false_positive_rate(const ConfusionCounts& counts);
// FNR = fn/(fn+tp); raises UndefinedRate when no gold-error pair exists.
double false_negative_rate(const ConfusionCounts& counts);
// 1 - (FPR+FNR)/2.
double balanced_accuracy(const ConfusionCounts& counts);

// Two-rater nominal-data alpha over the coincidence matrix, no missing
// values, with the small-sample (n-1) correction in the expected
// disagreement. Raises LengthMismatch on unequal lengths, InvalidArgument on
// fewer than two units and DegenerateData when all values are identical.
double krippendorff_alpha(const std::vector<int>& rater_a,
                          const std::vector<int>& rater_b);

struct MetricsReport {
  std::uint64_t scored = 0;
  ConfusionCounts counts;
  std::optional<double> bacc;
  std::optional<double> fpr;
  std::optional<double> fnr;
  std::optional<double> alpha;
  std::vector<std::string> problems;  // per-metric degeneracies

  nlohmann::ordered_json to_json() const;
};

// Metrics over aligned prediction/gold vectors. Degenerate metrics are
// reported as absent with a note instead of failing the whole report.
MetricsReport compute_metrics(const std::vector<FaithfulnessLabel>& preds,
                              const std::vector<FaithfulnessLabel>& golds);

struct FilteredReport {
  MetricsReport unfiltered;
  MetricsReport filtered;
  std::uint64_t removed = 0;

  nlohmann::ordered_json to_json() const;
};

// Metrics on the full record set and on the subset that survives ambiguity
// filtering. preds must align with records; every record needs a gold label
// and an ambiguity verdict from verdict_source.
FilteredReport filtered_report(
    const std::vector<EvaluationRecord>& records,
    const std::vector<FaithfulnessLabel>& preds,
    const std::function<std::optional<bool>(const EvaluationRecord&)>&
        verdict_source);

// Rates as percentages with two decimals.
std::string render_metrics_table(const MetricsReport& report);
std::string render_filtered_table(const FilteredReport& report);

}  // namespace faithdebate

#endif  // FAITHDEBATE_METRICS_HPP
