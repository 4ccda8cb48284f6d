#ifndef FAITHDEBATE_DEBATE_HPP
#define FAITHDEBATE_DEBATE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "faithdebate/domain.hpp"
#include "faithdebate/gateway.hpp"
#include "faithdebate/guidelines.hpp"
#include "json.hpp"

namespace faithdebate {

class RunLog;

struct SessionOutcome {
  enum class Kind { Consensus, Adjudicated };

  Kind kind = Kind::Consensus;
  FaithfulnessLabel label = FaithfulnessLabel::Faithful;
  int at_round = 0;                 // consensus round
  std::string explanation;          // adjudication only
  std::pair<int, int> votes{0, 0};  // (faithful, unfaithful) adjudicator tally
  bool tie_broken = false;
};

// Full ordered record of one debate session. rounds holds only the
// successfully parsed arguments (agent order); agents whose response never
// parsed in a round are listed in invalid_agents and excluded from consensus
// and votes.
struct SessionTranscript {
  int session_id = 0;
  std::string record_id;
  DebateConfig config_snapshot;
  std::uint64_t session_seed = 0;
  std::vector<Argument> stances;
  std::vector<std::vector<Argument>> rounds;
  std::vector<std::vector<int>> invalid_agents;
  SessionOutcome outcome;
  std::vector<std::pair<int, FaithfulnessLabel>> per_agent_final;
  bool degraded = false;
  std::vector<std::string> notes;

  void validate() const;
  nlohmann::ordered_json to_json() const;
  static SessionTranscript from_json(const nlohmann::json& doc);
};

struct AggregateOutcome {
  FaithfulnessLabel final_label = FaithfulnessLabel::Faithful;
  Aggregation mode = Aggregation::SingleSession;
  std::vector<SessionTranscript> sessions;
  std::pair<int, int> vote_tally{0, 0};  // (faithful, unfaithful)
  bool tie_broken = false;

  nlohmann::ordered_json to_json() const;
};

struct ExecutionOptions {
  bool parallel = false;
  RunLog* run_log = nullptr;
  const GuidelineSet* guidelines = nullptr;  // default set when null
  bool request_used_guidelines = false;      // guideline learning phase
  double temperature = 1.0;
  int max_tokens = 1024;
  int parse_retries = 2;  // extra re-asks per unparseable response

  // Raw text of each successfully parsed evaluator response; must be
  // thread-safe when parallel is on. Used by guideline learning.
  std::function<void(int agent_id, int round, const std::string& text)>
      evaluator_observer;
};

nlohmann::ordered_json debate_config_to_json(const DebateConfig& config);
DebateConfig debate_config_from_json(const nlohmann::json& doc);

class DebateEngine {
 public:
  DebateEngine(Gateway& gateway, ExecutionOptions options = {});

  // Imposes initial stances: exactly stance_split.first agents believe the
  // summary faithful, the rest unfaithful; which agent gets which stance is
  // a seeded random permutation.
  static std::vector<Argument> assign_stances(const DebateConfig& config,
                                              std::uint64_t session_seed);

  // The common label iff every valid argument agrees; empty otherwise.
  static std::optional<FaithfulnessLabel> check_consensus(
      const std::vector<Argument>& round_args);

  SessionTranscript run_session(const EvaluationRecord& record,
                                const DebateConfig& config,
                                int session_index = 0);

  AggregateOutcome run_simultaneous(const EvaluationRecord& record,
                                    const DebateConfig& config);

 private:
  struct RoundResult {
    std::vector<Argument> arguments;  // agent order, valid only
    std::vector<int> invalid;
  };

  RoundResult run_round(const EvaluationRecord& record,
                        const DebateConfig& config,
                        const SessionTranscript& transcript, int round,
                        const GuidelineSet& guidelines);

  SessionOutcome adjudicate(const EvaluationRecord& record,
                            const DebateConfig& config,
                            const SessionTranscript& transcript,
                            const GuidelineSet& guidelines);

  std::optional<Argument> call_and_parse(const CompletionRequest& base,
                                         int agent_id, int round,
                                         std::string* raw_out = nullptr);

  Gateway& gateway_;
  ExecutionOptions options_;
};

}  // namespace faithdebate

#endif  // FAITHDEBATE_DEBATE_HPP
