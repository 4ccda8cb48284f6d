#ifndef FAITHDEBATE_AMBIGUITY_HPP
#define FAITHDEBATE_AMBIGUITY_HPP

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "faithdebate/debate.hpp"
#include "faithdebate/domain.hpp"
#include "faithdebate/gateway.hpp"
#include "faithdebate/taxonomy.hpp"
#include "json.hpp"

namespace faithdebate {

enum class AmbiguityMethod {
  SelfConsistencyVariation,
  ZeroShotTaxonomy,
  DebateDisagreement,
  DebateArguments,
  RandomBaseline,
};

const char* ambiguity_method_name(AmbiguityMethod method);
AmbiguityMethod ambiguity_method_from_name(const std::string& name);

struct AmbiguityVerdict {
  std::string record_id;
  bool is_ambiguous = false;
  AmbiguityMethod method = AmbiguityMethod::ZeroShotTaxonomy;

  // Method-specific evidence.
  std::optional<double> faithful_pct;    // self-consistency variation
  std::optional<double> unfaithful_pct;
  std::optional<double> gap_pct;
  std::optional<int> valid_samples;
  std::optional<FineAmbiguity> cited_type;  // taxonomy-guided methods
  std::optional<std::string> explanation;
  std::optional<int> session_id;  // transcript-based methods

  nlohmann::ordered_json to_json() const;
};

struct AmbiguityOptions {
  double temperature = 1.0;  // sampling for the variation method
  double single_shot_temperature = 0.0;
  int max_tokens = 1024;
  int parse_retries = 2;
  bool parallel = false;
};

// Samples the faithfulness verdict n_queries times; the record counts as
// ambiguous when the faithful/unfaithful percentage gap over valid samples
// stays below threshold_pts. Fewer than n_queries/2 valid samples raise
// DegradedSignal.
AmbiguityVerdict detect_self_consistency_variation(
    Gateway& gateway, const EvaluationRecord& record, int n_queries = 41,
    double threshold_pts = 20.0, const AmbiguityOptions& options = {});

// One taxonomy-guided call on document and summary alone.
AmbiguityVerdict detect_zero_shot_taxonomy(Gateway& gateway,
                                           const EvaluationRecord& record,
                                           const AmbiguityTaxonomy& taxonomy,
                                           const AmbiguityOptions& options =
                                               {});

// Pure function of a stored transcript: ambiguous iff the session ran out of
// rounds without consensus and every agent's final label equals its imposed
// stance.
AmbiguityVerdict detect_debate_disagreement(
    const SessionTranscript& transcript);

// Judge call over the debate arguments (all rounds), guidelines and
// taxonomy.
AmbiguityVerdict detect_with_debate_arguments(
    Gateway& gateway, const EvaluationRecord& record,
    const SessionTranscript& transcript, const AmbiguityTaxonomy& taxonomy,
    const GuidelineSet& guidelines, const AmbiguityOptions& options = {});

// Seeded coin; harness completeness only.
AmbiguityVerdict detect_random_baseline(const EvaluationRecord& record,
                                        std::uint64_t seed);

// Partitions records into (kept, removed) by their ambiguity verdict.
// verdict_source must answer for every record; a missing answer raises
// MissingVerdict. Record order and multiplicity are preserved.
std::pair<std::vector<EvaluationRecord>, std::vector<EvaluationRecord>>
filter_ambiguous(
    const std::vector<EvaluationRecord>& records,
    const std::function<std::optional<bool>(const EvaluationRecord&)>&
        verdict_source);

// The gold-annotation verdict source for filter_ambiguous.
std::optional<bool> gold_ambiguity_verdict(const EvaluationRecord& record);

}  // namespace faithdebate

#endif  // FAITHDEBATE_AMBIGUITY_HPP
