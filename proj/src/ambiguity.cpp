#include "faithdebate/ambiguity.hpp"

#include <cmath>

#include "faithdebate/errors.hpp"
#include "faithdebate/parallel.hpp"
#include "faithdebate/prompting.hpp"
#include "faithdebate/rng.hpp"

namespace faithdebate {

const char* ambiguity_method_name(AmbiguityMethod method) {
  switch (method) {
    case AmbiguityMethod::SelfConsistencyVariation:
      return "self_consistency_variation";
    case AmbiguityMethod::ZeroShotTaxonomy: return "zero_shot_taxonomy";
    case AmbiguityMethod::DebateDisagreement: return "debate_disagreement";
    case AmbiguityMethod::DebateArguments: return "debate_arguments";
    case AmbiguityMethod::RandomBaseline: return "random_baseline";
  }
  return "unknown";
}

AmbiguityMethod ambiguity_method_from_name(const std::string& name) {
  if (name == "self_consistency_variation") {
    return AmbiguityMethod::SelfConsistencyVariation;
  }
  if (name == "zero_shot_taxonomy") return AmbiguityMethod::ZeroShotTaxonomy;
  if (name == "debate_disagreement") {
    return AmbiguityMethod::DebateDisagreement;
  }
  if (name == "debate_arguments") return AmbiguityMethod::DebateArguments;
  if (name == "random_baseline") return AmbiguityMethod::RandomBaseline;
  raise(ErrorCode::InvalidArgument, "unknown ambiguity method: " + name);
}

nlohmann::ordered_json AmbiguityVerdict::to_json() const {
  nlohmann::ordered_json j;
  j["record_id"] = record_id;
  j["is_ambiguous"] = is_ambiguous;
  j["method"] = ambiguity_method_name(method);
  if (faithful_pct) j["faithful_pct"] = *faithful_pct;
  if (unfaithful_pct) j["unfaithful_pct"] = *unfaithful_pct;
  if (gap_pct) j["gap_pct"] = *gap_pct;
  if (valid_samples) j["valid_samples"] = *valid_samples;
  if (cited_type) j["cited_type"] = fine_ambiguity_name(*cited_type);
  if (explanation) j["explanation"] = *explanation;
  if (session_id) j["session_id"] = *session_id;
  return j;
}

AmbiguityVerdict detect_self_consistency_variation(
    Gateway& gateway, const EvaluationRecord& record, int n_queries,
    double threshold_pts, const AmbiguityOptions& options) {
  record.validate();
  if (n_queries < 1) {
    raise(ErrorCode::InvalidArgument, "n_queries must be >= 1");
  }
  if (threshold_pts < 0.0 || threshold_pts > 100.0) {
    raise(ErrorCode::InvalidArgument,
          "threshold_pts must lie in [0, 100]");
  }
  std::string prompt = render_prompt(PromptKind::ZeroShot, record,
                                     default_guidelines(), nullptr, nullptr);

  std::vector<std::optional<FaithfulnessLabel>> slots(
      static_cast<std::size_t>(n_queries));
  parallel_for(n_queries, options.parallel, [&](int sample) {
    CompletionRequest request;
    request.user_text = prompt;
    request.temperature = options.temperature;
    request.max_tokens = options.max_tokens;
    request.request_tag =
        record.record_id + "/ascv" + std::to_string(sample);
    for (int attempt = 0; attempt <= options.parse_retries; ++attempt) {
      CompletionResponse response = gateway.complete(request);
      try {
        slots[static_cast<std::size_t>(sample)] =
            parse_argument(response.text, 0, 1).label;
        return;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ParseFailure) throw;
      }
    }
  });

  int faithful = 0;
  int valid = 0;
  for (const auto& slot : slots) {
    if (!slot) continue;
    ++valid;
    if (*slot == FaithfulnessLabel::Faithful) ++faithful;
  }
  if (valid * 2 < n_queries) {
    raise(ErrorCode::DegradedSignal,
          "only " + std::to_string(valid) + " of " +
              std::to_string(n_queries) + " samples parsed for record " +
              record.record_id);
  }

  AmbiguityVerdict verdict;
  verdict.record_id = record.record_id;
  verdict.method = AmbiguityMethod::SelfConsistencyVariation;
  verdict.valid_samples = valid;
  verdict.faithful_pct = 100.0 * faithful / valid;
  verdict.unfaithful_pct = 100.0 * (valid - faithful) / valid;
  verdict.gap_pct = std::fabs(*verdict.faithful_pct - *verdict.unfaithful_pct);
  verdict.is_ambiguous = *verdict.gap_pct < threshold_pts;
  return verdict;
}

namespace {

AmbiguityVerdict judge_call(Gateway& gateway, const EvaluationRecord& record,
                            PromptKind kind, const ChatHistoryView* history,
                            const AmbiguityTaxonomy& taxonomy,
                            const GuidelineSet& guidelines,
                            const std::string& tag, AmbiguityMethod method,
                            const AmbiguityOptions& options) {
  CompletionRequest request;
  request.user_text =
      render_prompt(kind, record, guidelines, history, &taxonomy);
  request.temperature = options.single_shot_temperature;
  request.max_tokens = options.max_tokens;
  request.request_tag = tag;

  std::string last_error;
  for (int attempt = 0; attempt <= options.parse_retries; ++attempt) {
    CompletionResponse response = gateway.complete(request);
    try {
      AmbiguityParse parsed =
          parse_ambiguity_verdict(response.text, taxonomy);
      AmbiguityVerdict verdict;
      verdict.record_id = record.record_id;
      verdict.method = method;
      verdict.is_ambiguous = parsed.is_ambiguous;
      verdict.cited_type = parsed.cited_type;
      verdict.explanation = parsed.explanation;
      return verdict;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseFailure) throw;
      last_error = e.what();
    }
  }
  raise(ErrorCode::ParseFailure,
        "no parseable ambiguity verdict for record " + record.record_id +
            ": " + last_error);
}

}  // namespace

AmbiguityVerdict detect_zero_shot_taxonomy(Gateway& gateway,
                                           const EvaluationRecord& record,
                                           const AmbiguityTaxonomy& taxonomy,
                                           const AmbiguityOptions& options) {
  record.validate();
  return judge_call(gateway, record, PromptKind::AmbiguityZeroShot, nullptr,
                    taxonomy, default_guidelines(),
                    record.record_id + "/amb-zs",
                    AmbiguityMethod::ZeroShotTaxonomy, options);
}

AmbiguityVerdict detect_debate_disagreement(
    const SessionTranscript& transcript) {
  if (transcript.rounds.empty()) {
    raise(ErrorCode::PreconditionViolation,
          "disagreement detection needs at least one completed round");
  }
  AmbiguityVerdict verdict;
  verdict.record_id = transcript.record_id;
  verdict.method = AmbiguityMethod::DebateDisagreement;
  verdict.session_id = transcript.session_id;

  // Ambiguous iff the debate exhausted its rounds without consensus and no
  // agent ever moved off its imposed stance.
  bool exhausted =
      transcript.outcome.kind == SessionOutcome::Kind::Adjudicated &&
      static_cast<int>(transcript.rounds.size()) ==
          transcript.config_snapshot.max_rounds;
  bool all_kept_stances =
      static_cast<int>(transcript.per_agent_final.size()) ==
      transcript.config_snapshot.num_agents;
  if (all_kept_stances) {
    for (const auto& [agent_id, final_label] : transcript.per_agent_final) {
      const Argument* stance = nullptr;
      for (const auto& candidate : transcript.stances) {
        if (candidate.agent_id == agent_id) {
          stance = &candidate;
          break;
        }
      }
      if (!stance || stance->label != final_label) {
        all_kept_stances = false;
        break;
      }
    }
  }
  verdict.is_ambiguous = exhausted && all_kept_stances;
  return verdict;
}

AmbiguityVerdict detect_with_debate_arguments(
    Gateway& gateway, const EvaluationRecord& record,
    const SessionTranscript& transcript, const AmbiguityTaxonomy& taxonomy,
    const GuidelineSet& guidelines, const AmbiguityOptions& options) {
  record.validate();
  if (transcript.rounds.empty()) {
    raise(ErrorCode::PreconditionViolation,
          "argument-based detection needs a transcript with rounds");
  }
  // The judge sees every round's arguments in stored order, pseudonymously.
  ChatHistoryView view;
  view.includes_initial_stances = false;
  for (const auto& round : transcript.rounds) {
    for (const auto& argument : round) {
      HistoryEntry entry;
      entry.display_name = "Agent " + std::to_string(argument.agent_id + 1);
      entry.argument = argument;
      view.entries.push_back(std::move(entry));
    }
  }
  AmbiguityVerdict verdict = judge_call(
      gateway, record, PromptKind::AmbiguityWithArguments, &view, taxonomy,
      guidelines, record.record_id + "/amb-args",
      AmbiguityMethod::DebateArguments, options);
  verdict.session_id = transcript.session_id;
  return verdict;
}

AmbiguityVerdict detect_random_baseline(const EvaluationRecord& record,
                                        std::uint64_t seed) {
  std::uint64_t id_hash = 1469598103934665603ULL;
  for (unsigned char c : record.record_id) {
    id_hash ^= c;
    id_hash *= 1099511628211ULL;
  }
  Rng rng(derive_seed(seed, {id_hash}));
  AmbiguityVerdict verdict;
  verdict.record_id = record.record_id;
  verdict.method = AmbiguityMethod::RandomBaseline;
  verdict.is_ambiguous = rng.bounded(2) == 1;
  return verdict;
}

std::pair<std::vector<EvaluationRecord>, std::vector<EvaluationRecord>>
filter_ambiguous(
    const std::vector<EvaluationRecord>& records,
    const std::function<std::optional<bool>(const EvaluationRecord&)>&
        verdict_source) {
  std::vector<EvaluationRecord> kept;
  std::vector<EvaluationRecord> removed;
  for (const auto& record : records) {
    std::optional<bool> ambiguous = verdict_source(record);
    if (!ambiguous) {
      raise(ErrorCode::MissingVerdict,
            "no ambiguity verdict for record " + record.record_id);
    }
    (*ambiguous ? removed : kept).push_back(record);
  }
  return {std::move(kept), std::move(removed)};
}

std::optional<bool> gold_ambiguity_verdict(const EvaluationRecord& record) {
  if (!record.gold_ambiguity) return std::nullopt;
  return record.gold_ambiguity->is_ambiguous;
}

}  // namespace faithdebate
