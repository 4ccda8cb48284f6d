#include "faithdebate/domain.hpp"

#include <array>

#include "faithdebate/errors.hpp"

namespace faithdebate {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "ok";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::InvalidWireLabel: return "invalid_wire_label";
    case ErrorCode::MissingContext: return "missing_context";
    case ErrorCode::ParseFailure: return "parse_failure";
    case ErrorCode::BackendUnavailable: return "backend_unavailable";
    case ErrorCode::AuthError: return "auth_error";
    case ErrorCode::ScriptedExhausted: return "scripted_exhausted";
    case ErrorCode::InvalidSplit: return "invalid_split";
    case ErrorCode::AllAgentsInvalid: return "all_agents_invalid";
    case ErrorCode::AllAdjudicatorsInvalid: return "all_adjudicators_invalid";
    case ErrorCode::DegradedSignal: return "degraded_signal";
    case ErrorCode::MissingVerdict: return "missing_verdict";
    case ErrorCode::MissingTranscripts: return "missing_transcripts";
    case ErrorCode::SchemaError: return "schema_error";
    case ErrorCode::KeyMismatch: return "key_mismatch";
    case ErrorCode::LengthMismatch: return "length_mismatch";
    case ErrorCode::UndefinedRate: return "undefined_rate";
    case ErrorCode::DegenerateData: return "degenerate_data";
    case ErrorCode::InvalidConfig: return "invalid_config";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::PreconditionViolation: return "precondition_violation";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

int label_to_wire(FaithfulnessLabel label) {
  return label == FaithfulnessLabel::Faithful ? 1 : 0;
}

FaithfulnessLabel wire_to_label(int v) {
  if (v == 1) return FaithfulnessLabel::Faithful;
  if (v == 0) return FaithfulnessLabel::Unfaithful;
  raise(ErrorCode::InvalidWireLabel,
        "wire label must be 0 or 1, got " + std::to_string(v));
}

const char* label_name(FaithfulnessLabel label) {
  return label == FaithfulnessLabel::Faithful ? "faithful" : "unfaithful";
}

const char* granularity_name(Granularity g) {
  return g == Granularity::FullSummary ? "summary" : "sentence";
}

Granularity granularity_from_name(const std::string& name) {
  if (name == "summary") return Granularity::FullSummary;
  if (name == "sentence") return Granularity::Sentence;
  raise(ErrorCode::InvalidArgument, "unknown granularity: " + name);
}

namespace {

struct FineInfo {
  FineAmbiguity fine;
  CoarseAmbiguity coarse;
  const char* name;
};

constexpr std::array<FineInfo, kFineAmbiguityCount> kFineInfo{{
    {FineAmbiguity::Deduction, CoarseAmbiguity::ImplicitReasoning,
     "deduction"},
    {FineAmbiguity::CommonSenseInference, CoarseAmbiguity::ImplicitReasoning,
     "common_sense_inference"},
    {FineAmbiguity::ValueBasedInference, CoarseAmbiguity::ImplicitReasoning,
     "value_based_inference"},
    {FineAmbiguity::OtherImplicitReasoning, CoarseAmbiguity::ImplicitReasoning,
     "other_implicit_reasoning"},
    {FineAmbiguity::HypernymyGeneralization, CoarseAmbiguity::Meaning,
     "hypernymy_generalization"},
    {FineAmbiguity::HyponymySpecialization, CoarseAmbiguity::Meaning,
     "hyponymy_specialization"},
    {FineAmbiguity::SynonymyParaphrasing, CoarseAmbiguity::Meaning,
     "synonymy_paraphrasing"},
    {FineAmbiguity::StructuralAmbiguity, CoarseAmbiguity::Meaning,
     "structural_ambiguity"},
    {FineAmbiguity::LexicalAmbiguity, CoarseAmbiguity::Meaning,
     "lexical_ambiguity"},
    {FineAmbiguity::Vagueness, CoarseAmbiguity::Meaning, "vagueness"},
    {FineAmbiguity::NonAssertion, CoarseAmbiguity::Meaning, "non_assertion"},
    {FineAmbiguity::OtherMeaningPhenomenon, CoarseAmbiguity::Meaning,
     "other_meaning_phenomenon"},
    {FineAmbiguity::Decontextualization, CoarseAmbiguity::Context,
     "decontextualization"},
    {FineAmbiguity::Conflation, CoarseAmbiguity::Context, "conflation"},
    {FineAmbiguity::OtherContextPhenomenon, CoarseAmbiguity::Context,
     "other_context_phenomenon"},
    {FineAmbiguity::OtherEvaluabilityIssue, CoarseAmbiguity::Other,
     "other_evaluability_issue"},
}};

}  // namespace

CoarseAmbiguity fine_ambiguity_parent(FineAmbiguity fine) {
  return kFineInfo[static_cast<int>(fine)].coarse;
}

const char* coarse_ambiguity_name(CoarseAmbiguity coarse) {
  switch (coarse) {
    case CoarseAmbiguity::ImplicitReasoning: return "implicit_reasoning";
    case CoarseAmbiguity::Meaning: return "meaning";
    case CoarseAmbiguity::Context: return "context";
    case CoarseAmbiguity::Other: return "other";
  }
  return "unknown";
}

CoarseAmbiguity coarse_ambiguity_from_name(const std::string& name) {
  if (name == "implicit_reasoning") return CoarseAmbiguity::ImplicitReasoning;
  if (name == "meaning") return CoarseAmbiguity::Meaning;
  if (name == "context") return CoarseAmbiguity::Context;
  if (name == "other") return CoarseAmbiguity::Other;
  raise(ErrorCode::InvalidArgument, "unknown coarse ambiguity: " + name);
}

const char* fine_ambiguity_name(FineAmbiguity fine) {
  return kFineInfo[static_cast<int>(fine)].name;
}

FineAmbiguity fine_ambiguity_from_name(const std::string& name) {
  for (const auto& info : kFineInfo) {
    if (name == info.name) return info.fine;
  }
  raise(ErrorCode::InvalidArgument, "unknown fine ambiguity: " + name);
}

void AmbiguityAnnotation::validate() const {
  if (!is_ambiguous && (coarse || fine)) {
    raise(ErrorCode::InvalidArgument,
          "non-ambiguous annotation must not carry a category");
  }
  if (fine) {
    CoarseAmbiguity parent = fine_ambiguity_parent(*fine);
    if (coarse && *coarse != parent) {
      raise(ErrorCode::InvalidArgument,
            std::string("fine type ") + fine_ambiguity_name(*fine) +
                " does not belong to coarse category " +
                coarse_ambiguity_name(*coarse));
    }
  }
}

void EvaluationRecord::validate() const {
  if (record_id.empty()) {
    raise(ErrorCode::InvalidArgument, "record_id must be non-empty");
  }
  if (document.empty() || summary.empty()) {
    raise(ErrorCode::InvalidArgument,
          "record " + record_id + ": document and summary must be non-empty");
  }
  bool sentence = granularity == Granularity::Sentence;
  if (sentence != sentence_index.has_value()) {
    raise(ErrorCode::InvalidArgument,
          "record " + record_id +
              ": sentence_index must be present exactly for sentence "
              "granularity");
  }
  if (sentence_index && *sentence_index < 0) {
    raise(ErrorCode::InvalidArgument,
          "record " + record_id + ": sentence_index must be >= 0");
  }
  if (gold_ambiguity) gold_ambiguity->validate();
}

void Argument::validate() const {
  if (round < 0) {
    raise(ErrorCode::InvalidArgument, "argument round must be >= 0");
  }
  if (imposed != (round == 0)) {
    raise(ErrorCode::InvalidArgument,
          "imposed stances are exactly the round-0 arguments");
  }
  if (imposed && !explanation.empty()) {
    raise(ErrorCode::InvalidArgument,
          "imposed stances carry no explanation");
  }
}

const char* aggregation_name(Aggregation a) {
  switch (a) {
    case Aggregation::DebateVote: return "debate_vote";
    case Aggregation::AgentVote: return "agent_vote";
    case Aggregation::SingleSession: return "single_session";
  }
  return "unknown";
}

Aggregation aggregation_from_name(const std::string& name) {
  if (name == "debate_vote") return Aggregation::DebateVote;
  if (name == "agent_vote") return Aggregation::AgentVote;
  if (name == "single_session") return Aggregation::SingleSession;
  raise(ErrorCode::InvalidArgument, "unknown aggregation: " + name);
}

void DebateConfig::validate() const {
  if (num_agents < 2) {
    raise(ErrorCode::InvalidConfig, "num_agents must be >= 2");
  }
  if (stance_split.first < 0 || stance_split.second < 0 ||
      stance_split.first + stance_split.second != num_agents) {
    raise(ErrorCode::InvalidSplit,
          "stance split (" + std::to_string(stance_split.first) + "," +
              std::to_string(stance_split.second) + ") must sum to " +
              std::to_string(num_agents));
  }
  if (max_rounds < 1) {
    raise(ErrorCode::InvalidConfig, "max_rounds must be >= 1");
  }
  if (num_adjudicators < 1 || num_adjudicators % 2 == 0) {
    raise(ErrorCode::InvalidConfig, "num_adjudicators must be odd and >= 1");
  }
  if (num_sessions < 1) {
    raise(ErrorCode::InvalidConfig, "num_sessions must be >= 1");
  }
  if (aggregation != Aggregation::SingleSession) {
    if (num_sessions < 2) {
      raise(ErrorCode::InvalidConfig,
            "aggregated modes need num_sessions >= 2");
    }
    if (aggregation == Aggregation::DebateVote && num_sessions % 2 == 0) {
      raise(ErrorCode::InvalidConfig, "debate_vote needs an odd num_sessions");
    }
  } else if (num_sessions != 1) {
    raise(ErrorCode::InvalidConfig, "single_session runs exactly one session");
  }
  if (intervention_round &&
      (*intervention_round < 2 || *intervention_round > max_rounds)) {
    raise(ErrorCode::InvalidConfig,
          "intervention_round must lie in [2, max_rounds]");
  }
}

std::pair<int, int> uniform_stance_split(int num_agents) {
  if (num_agents < 2 || num_agents % 2 != 0) {
    raise(ErrorCode::InvalidSplit,
          "a uniform stance split needs an even agent count; pass an "
          "explicit split for " +
              std::to_string(num_agents) + " agents");
  }
  return {num_agents / 2, num_agents / 2};
}

}  // namespace faithdebate
