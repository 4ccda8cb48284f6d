#include "faithdebate/metrics.hpp"

#include <cstdio>
#include <map>

#include "faithdebate/errors.hpp"

namespace faithdebate {

ConfusionCounts confusion(const std::vector<FaithfulnessLabel>& preds,
                          const std::vector<FaithfulnessLabel>& golds) {
  if (preds.size() != golds.size()) {
    raise(ErrorCode::LengthMismatch,
          "prediction and gold vectors differ in length (" +
              std::to_string(preds.size()) + " vs " +
              std::to_string(golds.size()) + ")");
  }
  if (preds.empty()) {
    raise(ErrorCode::LengthMismatch, "cannot score an empty vector");
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    bool pred_error = preds[i] == FaithfulnessLabel::Unfaithful;
    bool gold_error = golds[i] == FaithfulnessLabel::Unfaithful;
    if (pred_error && gold_error) {
      ++counts.tp;
    } else if (pred_error && !gold_error) {
      ++counts.fp;
    } else if (!pred_error && gold_error) {
      ++counts.fn;
    } else {
      ++counts.tn;
    }
  }
  return counts;
}

double false_positive_rate(const ConfusionCounts& counts) {
  if (counts.fp + counts.tn == 0) {
    raise(ErrorCode::UndefinedRate,
          "FPR undefined: no gold-faithful pair scored");
  }
  return static_cast<double>(counts.fp) /
         static_cast<double>(counts.fp + counts.tn);
}

double false_negative_rate(const ConfusionCounts& counts) {
  if (counts.fn + counts.tp == 0) {
    raise(ErrorCode::UndefinedRate,
          "FNR undefined: no gold-error pair scored");
  }
  return static_cast<double>(counts.fn) /
         static_cast<double>(counts.fn + counts.tp);
}

double balanced_accuracy(const ConfusionCounts& counts) {
  return 1.0 - 0.5 * (false_positive_rate(counts) +
                      false_negative_rate(counts));
}

double krippendorff_alpha(const std::vector<int>& rater_a,
                          const std::vector<int>& rater_b) {
  if (rater_a.size() != rater_b.size()) {
    raise(ErrorCode::LengthMismatch,
          "rater sequences differ in length");
  }
  if (rater_a.size() < 2) {
    raise(ErrorCode::InvalidArgument, "alpha needs at least two units");
  }

  // With two raters and no missing data the coincidence matrix reduces to
  // value marginals plus the disagreement count:
  //   D_o = sum_{c!=k} o_ck / n           (n = 2 * units)
  //   D_e = sum_{c!=k} n_c n_k / (n(n-1))
  //   alpha = 1 - D_o/D_e = 1 - 2d(n-1) / (n^2 - sum_c n_c^2)
  std::map<int, std::uint64_t> marginals;
  std::uint64_t disagreements = 0;
  for (std::size_t i = 0; i < rater_a.size(); ++i) {
    ++marginals[rater_a[i]];
    ++marginals[rater_b[i]];
    if (rater_a[i] != rater_b[i]) ++disagreements;
  }
  if (marginals.size() < 2) {
    raise(ErrorCode::DegenerateData,
          "alpha undefined: all values identical, expected disagreement is "
          "zero");
  }
  double n = static_cast<double>(2 * rater_a.size());
  double sum_sq = 0.0;
  for (const auto& [value, count] : marginals) {
    sum_sq += static_cast<double>(count) * static_cast<double>(count);
  }
  return 1.0 - 2.0 * static_cast<double>(disagreements) * (n - 1.0) /
                   (n * n - sum_sq);
}

nlohmann::ordered_json MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["scored"] = scored;
  j["confusion"] = {{"tp", counts.tp},
                    {"fp", counts.fp},
                    {"tn", counts.tn},
                    {"fn", counts.fn}};
  auto put = [&](const char* key, const std::optional<double>& value) {
    if (value) {
      j[key] = *value;
    } else {
      j[key] = nullptr;
    }
  };
  put("bacc", bacc);
  put("fpr", fpr);
  put("fnr", fnr);
  put("alpha", alpha);
  if (!problems.empty()) j["problems"] = problems;
  return j;
}

MetricsReport compute_metrics(const std::vector<FaithfulnessLabel>& preds,
                              const std::vector<FaithfulnessLabel>& golds) {
  MetricsReport report;
  report.counts = confusion(preds, golds);
  report.scored = report.counts.total();
  try {
    report.fpr = false_positive_rate(report.counts);
  } catch (const Error& e) {
    report.problems.push_back(e.what());
  }
  try {
    report.fnr = false_negative_rate(report.counts);
  } catch (const Error& e) {
    report.problems.push_back(e.what());
  }
  if (report.fpr && report.fnr) {
    report.bacc = 1.0 - 0.5 * (*report.fpr + *report.fnr);
  }
  std::vector<int> pred_wire;
  std::vector<int> gold_wire;
  pred_wire.reserve(preds.size());
  gold_wire.reserve(golds.size());
  for (auto label : preds) pred_wire.push_back(label_to_wire(label));
  for (auto label : golds) gold_wire.push_back(label_to_wire(label));
  try {
    report.alpha = krippendorff_alpha(pred_wire, gold_wire);
  } catch (const Error& e) {
    report.problems.push_back(e.what());
  }
  return report;
}

nlohmann::ordered_json FilteredReport::to_json() const {
  nlohmann::ordered_json j;
  j["unfiltered"] = unfiltered.to_json();
  j["filtered"] = filtered.to_json();
  j["removed"] = removed;
  return j;
}

FilteredReport filtered_report(
    const std::vector<EvaluationRecord>& records,
    const std::vector<FaithfulnessLabel>& preds,
    const std::function<std::optional<bool>(const EvaluationRecord&)>&
        verdict_source) {
  if (records.size() != preds.size()) {
    raise(ErrorCode::LengthMismatch,
          "records and predictions differ in length");
  }
  std::vector<FaithfulnessLabel> golds;
  golds.reserve(records.size());
  for (const auto& record : records) {
    if (!record.gold_label) {
      raise(ErrorCode::InvalidArgument,
            "record " + record.record_id + " has no gold label to score");
    }
    golds.push_back(*record.gold_label);
  }

  std::vector<FaithfulnessLabel> kept_preds;
  std::vector<FaithfulnessLabel> kept_golds;
  std::uint64_t removed = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::optional<bool> ambiguous = verdict_source(records[i]);
    if (!ambiguous) {
      raise(ErrorCode::MissingVerdict,
            "no ambiguity verdict for record " + records[i].record_id);
    }
    if (*ambiguous) {
      ++removed;
    } else {
      kept_preds.push_back(preds[i]);
      kept_golds.push_back(golds[i]);
    }
  }

  FilteredReport report;
  report.unfiltered = compute_metrics(preds, golds);
  if (kept_preds.empty()) {
    report.filtered.problems.push_back(
        "every record was filtered as ambiguous");
  } else {
    report.filtered = compute_metrics(kept_preds, kept_golds);
  }
  report.removed = removed;
  return report;
}

namespace {

std::string pct(const std::optional<double>& value) {
  if (!value) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *value * 100.0);
  return buf;
}

std::string plain(const std::optional<double>& value) {
  if (!value) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *value);
  return buf;
}

void append_row(std::string& out, const std::string& name,
                const std::string& a, const std::string& b = "") {
  char buf[96];
  if (b.empty()) {
    std::snprintf(buf, sizeof(buf), "%-10s %12s\n", name.c_str(), a.c_str());
  } else {
    std::snprintf(buf, sizeof(buf), "%-10s %12s %12s\n", name.c_str(),
                  a.c_str(), b.c_str());
  }
  out += buf;
}

}  // namespace

std::string render_metrics_table(const MetricsReport& report) {
  std::string out;
  append_row(out, "metric", "value");
  append_row(out, "BAcc (%)", pct(report.bacc));
  append_row(out, "K-alpha", plain(report.alpha));
  append_row(out, "FPR (%)", pct(report.fpr));
  append_row(out, "FNR (%)", pct(report.fnr));
  append_row(out, "n", std::to_string(report.scored));
  for (const auto& problem : report.problems) {
    out += "note: " + problem + "\n";
  }
  return out;
}

std::string render_filtered_table(const FilteredReport& report) {
  std::string out;
  append_row(out, "metric", "unfiltered", "filtered");
  append_row(out, "BAcc (%)", pct(report.unfiltered.bacc),
             pct(report.filtered.bacc));
  append_row(out, "K-alpha", plain(report.unfiltered.alpha),
             plain(report.filtered.alpha));
  append_row(out, "FPR (%)", pct(report.unfiltered.fpr),
             pct(report.filtered.fpr));
  append_row(out, "FNR (%)", pct(report.unfiltered.fnr),
             pct(report.filtered.fnr));
  append_row(out, "n", std::to_string(report.unfiltered.scored),
             std::to_string(report.filtered.scored));
  append_row(out, "removed", "", std::to_string(report.removed));
  for (const auto& problem : report.unfiltered.problems) {
    out += "note (unfiltered): " + problem + "\n";
  }
  for (const auto& problem : report.filtered.problems) {
    out += "note (filtered): " + problem + "\n";
  }
  return out;
}

}  // namespace faithdebate
