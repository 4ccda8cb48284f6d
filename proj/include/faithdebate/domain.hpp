#ifndef FAITHDEBATE_DOMAIN_HPP
#define FAITHDEBATE_DOMAIN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace faithdebate {

// All domain types in this header are immutable value objects; they are safe
// to copy, share and send between concurrent tasks.

enum class FaithfulnessLabel { Faithful, Unfaithful };

// Wire encoding used in prompts, dataset files and predictions:
// 1 = faithful/consistent, 0 = unfaithful/inconsistent.
int label_to_wire(FaithfulnessLabel label);
FaithfulnessLabel wire_to_label(int v);  // throws InvalidWireLabel otherwise

const char* label_name(FaithfulnessLabel label);  // "faithful"/"unfaithful"

enum class Granularity { FullSummary, Sentence };

const char* granularity_name(Granularity g);
Granularity granularity_from_name(const std::string& name);

enum class CoarseAmbiguity { ImplicitReasoning, Meaning, Context, Other };

// The 16 fine ambiguity types. Parents are fixed: the first four fall under
// implicit reasoning, the next eight under meaning, then three context types
// and the final catch-all.
enum class FineAmbiguity {
  Deduction,
  CommonSenseInference,
  ValueBasedInference,
  OtherImplicitReasoning,
  HypernymyGeneralization,
  HyponymySpecialization,
  SynonymyParaphrasing,
  StructuralAmbiguity,
  LexicalAmbiguity,
  Vagueness,
  NonAssertion,
  OtherMeaningPhenomenon,
  Decontextualization,
  Conflation,
  OtherContextPhenomenon,
  OtherEvaluabilityIssue,
};

inline constexpr int kFineAmbiguityCount = 16;

CoarseAmbiguity fine_ambiguity_parent(FineAmbiguity fine);
const char* coarse_ambiguity_name(CoarseAmbiguity coarse);
CoarseAmbiguity coarse_ambiguity_from_name(const std::string& name);
const char* fine_ambiguity_name(FineAmbiguity fine);
FineAmbiguity fine_ambiguity_from_name(const std::string& name);

struct AmbiguityAnnotation {
  bool is_ambiguous = false;
  std::optional<CoarseAmbiguity> coarse;
  std::optional<FineAmbiguity> fine;
  std::optional<std::string> note;

  // coarse/fine may be present only when ambiguous, and fine's parent must
  // match coarse. Throws InvalidArgument on violation.
  void validate() const;
};

struct EvaluationRecord {
  std::string record_id;
  std::string dataset;
  std::string document;
  std::string summary;
  Granularity granularity = Granularity::FullSummary;
  std::optional<int> sentence_index;  // 0-based; present iff Sentence
  std::optional<FaithfulnessLabel> gold_label;
  std::optional<AmbiguityAnnotation> gold_ambiguity;

  void validate() const;
};

// One agent utterance. Round 0 arguments are the imposed initial stances and
// carry no explanation; every later round comes from a parsed model response.
struct Argument {
  int agent_id = 0;
  int round = 0;
  FaithfulnessLabel label = FaithfulnessLabel::Faithful;
  std::string explanation;
  std::optional<std::string> thinking;
  bool imposed = false;

  void validate() const;  // imposed iff round==0 with empty explanation
};

enum class Aggregation { DebateVote, AgentVote, SingleSession };

const char* aggregation_name(Aggregation a);
Aggregation aggregation_from_name(const std::string& name);

struct DebateConfig {
  int num_agents = 4;
  std::pair<int, int> stance_split{2, 2};  // (faithful, unfaithful)
  int max_rounds = 3;
  int num_adjudicators = 3;  // odd
  int num_sessions = 1;      // 3 for the simultaneous-session vote modes
  Aggregation aggregation = Aggregation::SingleSession;
  std::optional<int> intervention_round;  // in [2, max_rounds] when set
  std::uint64_t master_seed = 0;

  void validate() const;  // throws InvalidConfig / InvalidSplit
};

// The even-agents uniform split. Odd counts are rejected: callers must pass
// an explicit split instead.
std::pair<int, int> uniform_stance_split(int num_agents);

}  // namespace faithdebate

#endif  // FAITHDEBATE_DOMAIN_HPP
