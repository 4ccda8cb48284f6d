#include "faithdebate/debate.hpp"

#include <algorithm>

#include "faithdebate/errors.hpp"
#include "faithdebate/parallel.hpp"
#include "faithdebate/prompting.hpp"
#include "faithdebate/rng.hpp"
#include "faithdebate/runlog.hpp"

namespace faithdebate {

namespace {

// Seed stream tags; every randomized decision draws from its own derived
// stream so results are schedule-independent.
constexpr std::uint64_t kSessionStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
constexpr std::uint64_t kAdjudicatorStream = 3;
constexpr std::uint64_t kPickStream = 4;
constexpr std::uint64_t kStanceStream = 5;

std::string agent_tag(const std::string& record_id, int session, int round,
                      int agent) {
  return record_id + "/s" + std::to_string(session) + "/r" +
         std::to_string(round) + "/a" + std::to_string(agent);
}

std::string adjudicator_tag(const std::string& record_id, int session,
                            int adjudicator) {
  return record_id + "/s" + std::to_string(session) + "/adj" +
         std::to_string(adjudicator);
}

// Pseudonymous display names assigned after shuffling; within each round
// group peers are renumbered from 1 and the reading agent (if any) is "You".
std::vector<HistoryEntry> name_entries(std::vector<Argument> group,
                                       std::optional<int> reader) {
  std::vector<HistoryEntry> entries;
  entries.reserve(group.size());
  int counter = 0;
  for (auto& argument : group) {
    HistoryEntry entry;
    if (reader && argument.agent_id == *reader) {
      entry.display_name = "You";
    } else {
      entry.display_name = "Agent " + std::to_string(++counter);
    }
    entry.argument = std::move(argument);
    entries.push_back(std::move(entry));
  }
  return entries;
}

FaithfulnessLabel majority_or_tie(int count_faithful, int count_unfaithful,
                                  bool& tie_broken) {
  if (count_faithful == count_unfaithful) {
    // Documented tie rule: unfaithful wins; impossible under odd voter
    // counts with no degraded votes.
    tie_broken = true;
    return FaithfulnessLabel::Unfaithful;
  }
  tie_broken = false;
  return count_faithful > count_unfaithful ? FaithfulnessLabel::Faithful
                                           : FaithfulnessLabel::Unfaithful;
}

}  // namespace

void SessionTranscript::validate() const {
  config_snapshot.validate();
  if (static_cast<int>(stances.size()) != config_snapshot.num_agents) {
    raise(ErrorCode::Internal, "transcript stance count mismatch");
  }
  int faithful = 0;
  for (const auto& stance : stances) {
    stance.validate();
    if (!stance.imposed) {
      raise(ErrorCode::Internal, "round-0 arguments must be imposed");
    }
    if (stance.label == FaithfulnessLabel::Faithful) ++faithful;
  }
  if (faithful != config_snapshot.stance_split.first) {
    raise(ErrorCode::Internal, "transcript violates the stance split");
  }
  if (static_cast<int>(rounds.size()) > config_snapshot.max_rounds) {
    raise(ErrorCode::Internal, "transcript has more rounds than allowed");
  }
  if (outcome.kind == SessionOutcome::Kind::Consensus) {
    if (outcome.at_round != static_cast<int>(rounds.size())) {
      raise(ErrorCode::Internal,
            "no arguments may exist past the consensus round");
    }
    for (const auto& argument : rounds.back()) {
      if (argument.label != outcome.label) {
        raise(ErrorCode::Internal,
              "consensus round contains a dissenting argument");
      }
    }
  }
  for (const auto& [agent_id, label] : per_agent_final) {
    bool found = false;
    for (auto it = rounds.rbegin(); it != rounds.rend() && !found; ++it) {
      for (const auto& argument : *it) {
        if (argument.agent_id == agent_id) {
          if (argument.label != label) {
            raise(ErrorCode::Internal,
                  "per_agent_final disagrees with the last valid round");
          }
          found = true;
          break;
        }
      }
    }
    if (!found) {
      raise(ErrorCode::Internal,
            "per_agent_final lists an agent with no valid argument");
    }
  }
}

nlohmann::ordered_json debate_config_to_json(const DebateConfig& config) {
  nlohmann::ordered_json j;
  j["num_agents"] = config.num_agents;
  j["stance_split"] = {config.stance_split.first, config.stance_split.second};
  j["max_rounds"] = config.max_rounds;
  j["num_adjudicators"] = config.num_adjudicators;
  j["num_sessions"] = config.num_sessions;
  j["aggregation"] = aggregation_name(config.aggregation);
  if (config.intervention_round) {
    j["intervention_round"] = *config.intervention_round;
  } else {
    j["intervention_round"] = nullptr;
  }
  j["master_seed"] = config.master_seed;
  return j;
}

DebateConfig debate_config_from_json(const nlohmann::json& doc) {
  DebateConfig config;
  config.num_agents = doc.value("num_agents", config.num_agents);
  if (doc.contains("stance_split")) {
    config.stance_split = {doc["stance_split"].at(0).get<int>(),
                           doc["stance_split"].at(1).get<int>()};
  } else {
    config.stance_split = uniform_stance_split(config.num_agents);
  }
  config.max_rounds = doc.value("max_rounds", config.max_rounds);
  config.num_adjudicators =
      doc.value("num_adjudicators", config.num_adjudicators);
  if (doc.contains("aggregation")) {
    config.aggregation =
        aggregation_from_name(doc["aggregation"].get<std::string>());
  }
  // Vote modes default to the three simultaneous sessions.
  config.num_sessions = doc.value(
      "num_sessions",
      config.aggregation == Aggregation::SingleSession ? 1 : 3);
  if (doc.contains("intervention_round") &&
      !doc["intervention_round"].is_null()) {
    config.intervention_round = doc["intervention_round"].get<int>();
  }
  config.master_seed = doc.value("master_seed", config.master_seed);
  config.validate();
  return config;
}

namespace {

nlohmann::ordered_json argument_to_json(const Argument& argument) {
  nlohmann::ordered_json j;
  j["agent_id"] = argument.agent_id;
  j["round"] = argument.round;
  j["label"] = label_to_wire(argument.label);
  if (!argument.imposed) j["explanation"] = argument.explanation;
  if (argument.thinking) j["thinking"] = *argument.thinking;
  j["imposed"] = argument.imposed;
  return j;
}

Argument argument_from_json(const nlohmann::json& j) {
  Argument argument;
  argument.agent_id = j.at("agent_id").get<int>();
  argument.round = j.at("round").get<int>();
  argument.label = wire_to_label(j.at("label").get<int>());
  argument.explanation = j.value("explanation", "");
  if (j.contains("thinking")) argument.thinking = j["thinking"];
  argument.imposed = j.value("imposed", false);
  return argument;
}

}  // namespace

nlohmann::ordered_json SessionTranscript::to_json() const {
  nlohmann::ordered_json j;
  j["session_id"] = session_id;
  j["record_id"] = record_id;
  j["config"] = debate_config_to_json(config_snapshot);
  j["session_seed"] = session_seed;
  j["stances"] = nlohmann::ordered_json::array();
  for (const auto& stance : stances) {
    j["stances"].push_back(argument_to_json(stance));
  }
  j["rounds"] = nlohmann::ordered_json::array();
  for (const auto& round : rounds) {
    nlohmann::ordered_json round_json = nlohmann::ordered_json::array();
    for (const auto& argument : round) {
      round_json.push_back(argument_to_json(argument));
    }
    j["rounds"].push_back(std::move(round_json));
  }
  j["invalid_agents"] = invalid_agents;
  nlohmann::ordered_json outcome_json;
  if (outcome.kind == SessionOutcome::Kind::Consensus) {
    outcome_json["kind"] = "consensus";
    outcome_json["label"] = label_to_wire(outcome.label);
    outcome_json["at_round"] = outcome.at_round;
  } else {
    outcome_json["kind"] = "adjudicated";
    outcome_json["label"] = label_to_wire(outcome.label);
    outcome_json["explanation"] = outcome.explanation;
    outcome_json["votes"] = {outcome.votes.first, outcome.votes.second};
    outcome_json["tie_broken"] = outcome.tie_broken;
  }
  j["outcome"] = std::move(outcome_json);
  j["per_agent_final"] = nlohmann::ordered_json::array();
  for (const auto& [agent_id, label] : per_agent_final) {
    j["per_agent_final"].push_back({agent_id, label_to_wire(label)});
  }
  j["degraded"] = degraded;
  j["notes"] = notes;
  return j;
}

SessionTranscript SessionTranscript::from_json(const nlohmann::json& doc) {
  SessionTranscript transcript;
  transcript.session_id = doc.at("session_id").get<int>();
  transcript.record_id = doc.at("record_id").get<std::string>();
  transcript.config_snapshot = debate_config_from_json(doc.at("config"));
  transcript.session_seed = doc.value("session_seed", 0ULL);
  for (const auto& j : doc.at("stances")) {
    transcript.stances.push_back(argument_from_json(j));
  }
  for (const auto& round : doc.at("rounds")) {
    std::vector<Argument> arguments;
    for (const auto& j : round) arguments.push_back(argument_from_json(j));
    transcript.rounds.push_back(std::move(arguments));
  }
  if (doc.contains("invalid_agents")) {
    transcript.invalid_agents =
        doc["invalid_agents"].get<std::vector<std::vector<int>>>();
  }
  const auto& outcome_json = doc.at("outcome");
  if (outcome_json.at("kind") == "consensus") {
    transcript.outcome.kind = SessionOutcome::Kind::Consensus;
    transcript.outcome.label =
        wire_to_label(outcome_json.at("label").get<int>());
    transcript.outcome.at_round = outcome_json.at("at_round").get<int>();
  } else {
    transcript.outcome.kind = SessionOutcome::Kind::Adjudicated;
    transcript.outcome.label =
        wire_to_label(outcome_json.at("label").get<int>());
    transcript.outcome.explanation = outcome_json.value("explanation", "");
    transcript.outcome.votes = {outcome_json.at("votes").at(0).get<int>(),
                                outcome_json.at("votes").at(1).get<int>()};
    transcript.outcome.tie_broken = outcome_json.value("tie_broken", false);
  }
  for (const auto& j : doc.at("per_agent_final")) {
    transcript.per_agent_final.emplace_back(
        j.at(0).get<int>(), wire_to_label(j.at(1).get<int>()));
  }
  transcript.degraded = doc.value("degraded", false);
  if (doc.contains("notes")) {
    transcript.notes = doc["notes"].get<std::vector<std::string>>();
  }
  return transcript;
}

nlohmann::ordered_json AggregateOutcome::to_json() const {
  nlohmann::ordered_json j;
  j["final_label"] = label_to_wire(final_label);
  j["mode"] = aggregation_name(mode);
  j["vote_tally"] = {vote_tally.first, vote_tally.second};
  j["tie_broken"] = tie_broken;
  j["sessions"] = nlohmann::ordered_json::array();
  for (const auto& session : sessions) {
    j["sessions"].push_back(session.to_json());
  }
  return j;
}

DebateEngine::DebateEngine(Gateway& gateway, ExecutionOptions options)
    : gateway_(gateway), options_(options) {}

std::vector<Argument> DebateEngine::assign_stances(const DebateConfig& config,
                                                   std::uint64_t session_seed) {
  if (config.stance_split.first + config.stance_split.second !=
      config.num_agents) {
    raise(ErrorCode::InvalidSplit,
          "stance split must sum to the agent count");
  }
  std::vector<FaithfulnessLabel> labels;
  labels.reserve(static_cast<std::size_t>(config.num_agents));
  for (int i = 0; i < config.stance_split.first; ++i) {
    labels.push_back(FaithfulnessLabel::Faithful);
  }
  for (int i = 0; i < config.stance_split.second; ++i) {
    labels.push_back(FaithfulnessLabel::Unfaithful);
  }
  Rng rng(derive_seed(session_seed, {kStanceStream}));
  rng.shuffle(labels);

  std::vector<Argument> stances;
  stances.reserve(labels.size());
  for (int agent = 0; agent < config.num_agents; ++agent) {
    Argument stance;
    stance.agent_id = agent;
    stance.round = 0;
    stance.label = labels[static_cast<std::size_t>(agent)];
    stance.imposed = true;
    stances.push_back(std::move(stance));
  }
  return stances;
}

std::optional<FaithfulnessLabel> DebateEngine::check_consensus(
    const std::vector<Argument>& round_args) {
  if (round_args.empty()) {
    raise(ErrorCode::PreconditionViolation,
          "consensus needs at least one valid argument");
  }
  FaithfulnessLabel label = round_args.front().label;
  for (const auto& argument : round_args) {
    if (argument.label != label) return std::nullopt;
  }
  return label;
}

std::optional<Argument> DebateEngine::call_and_parse(
    const CompletionRequest& base, int agent_id, int round,
    std::string* raw_out) {
  for (int attempt = 0; attempt <= options_.parse_retries; ++attempt) {
    CompletionResponse response = gateway_.complete(base);
    try {
      Argument parsed = parse_argument(response.text, agent_id, round);
      if (raw_out) *raw_out = std::move(response.text);
      return parsed;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseFailure) throw;
    }
  }
  return std::nullopt;
}

DebateEngine::RoundResult DebateEngine::run_round(
    const EvaluationRecord& record, const DebateConfig& config,
    const SessionTranscript& transcript, int round,
    const GuidelineSet& guidelines) {
  bool intervention = config.intervention_round &&
                      round >= *config.intervention_round;

  std::vector<std::optional<Argument>> slots(
      static_cast<std::size_t>(config.num_agents));
  parallel_for(config.num_agents, options_.parallel, [&](int agent) {
    // Per-(round, agent) shuffle stream: every agent sees each prior round
    // in its own seeded order, independent of scheduling.
    Rng rng(derive_seed(transcript.session_seed,
                        {kShuffleStream, static_cast<std::uint64_t>(round),
                         static_cast<std::uint64_t>(agent)}));
    ChatHistoryView view;
    view.includes_initial_stances = round == 1;
    if (round == 1) {
      std::vector<Argument> stances = transcript.stances;
      rng.shuffle(stances);
      view.entries = name_entries(std::move(stances), agent);
    } else {
      for (int prior = 1; prior < round; ++prior) {
        std::vector<Argument> group =
            transcript.rounds[static_cast<std::size_t>(prior - 1)];
        rng.shuffle(group);
        auto named = name_entries(std::move(group), agent);
        view.entries.insert(view.entries.end(),
                            std::make_move_iterator(named.begin()),
                            std::make_move_iterator(named.end()));
      }
    }

    RenderOptions render_options;
    render_options.intervention = intervention;
    render_options.request_used_guidelines = options_.request_used_guidelines;
    CompletionRequest request;
    request.user_text = render_prompt(
        round == 1 ? PromptKind::EvaluatorRound1 : PromptKind::EvaluatorLater,
        record, guidelines, &view, nullptr, render_options);
    request.temperature = options_.temperature;
    request.max_tokens = options_.max_tokens;
    request.request_tag =
        agent_tag(record.record_id, transcript.session_id, round, agent);
    std::string raw;
    slots[static_cast<std::size_t>(agent)] =
        call_and_parse(request, agent, round, &raw);
    if (slots[static_cast<std::size_t>(agent)] &&
        options_.evaluator_observer) {
      options_.evaluator_observer(agent, round, raw);
    }
  });

  RoundResult result;
  for (int agent = 0; agent < config.num_agents; ++agent) {
    auto& slot = slots[static_cast<std::size_t>(agent)];
    if (slot) {
      result.arguments.push_back(std::move(*slot));
    } else {
      result.invalid.push_back(agent);
    }
  }
  if (result.arguments.empty()) {
    raise(ErrorCode::AllAgentsInvalid,
          "every agent response failed to parse in round " +
              std::to_string(round) + " for record " + record.record_id);
  }
  return result;
}

SessionOutcome DebateEngine::adjudicate(const EvaluationRecord& record,
                                        const DebateConfig& config,
                                        const SessionTranscript& transcript,
                                        const GuidelineSet& guidelines) {
  const std::vector<Argument>& final_args = transcript.rounds.back();
  int k = config.num_adjudicators;

  std::vector<std::optional<Argument>> verdicts(static_cast<std::size_t>(k));
  parallel_for(k, options_.parallel, [&](int adjudicator) {
    Rng rng(derive_seed(
        transcript.session_seed,
        {kAdjudicatorStream, static_cast<std::uint64_t>(adjudicator)}));
    std::vector<Argument> ordered = final_args;
    rng.shuffle(ordered);
    ChatHistoryView view;
    view.includes_initial_stances = false;
    view.entries = name_entries(std::move(ordered), std::nullopt);

    CompletionRequest request;
    request.user_text = render_prompt(PromptKind::Adjudicator, record,
                                      guidelines, &view, nullptr);
    request.temperature = options_.temperature;
    request.max_tokens = options_.max_tokens;
    request.request_tag =
        adjudicator_tag(record.record_id, transcript.session_id, adjudicator);
    verdicts[static_cast<std::size_t>(adjudicator)] =
        call_and_parse(request, adjudicator, config.max_rounds);
  });

  int count_faithful = 0;
  int count_unfaithful = 0;
  std::vector<const Argument*> valid;
  for (const auto& verdict : verdicts) {
    if (!verdict) continue;
    valid.push_back(&*verdict);
    if (verdict->label == FaithfulnessLabel::Faithful) {
      ++count_faithful;
    } else {
      ++count_unfaithful;
    }
  }
  if (valid.empty()) {
    raise(ErrorCode::AllAdjudicatorsInvalid,
          "no adjudicator verdict parsed for record " + record.record_id);
  }

  SessionOutcome outcome;
  outcome.kind = SessionOutcome::Kind::Adjudicated;
  outcome.votes = {count_faithful, count_unfaithful};
  outcome.label = majority_or_tie(count_faithful, count_unfaithful,
                                  outcome.tie_broken);

  std::vector<const Argument*> majority;
  for (const Argument* verdict : valid) {
    if (verdict->label == outcome.label) majority.push_back(verdict);
  }
  if (!majority.empty()) {
    Rng rng(derive_seed(transcript.session_seed, {kPickStream}));
    outcome.explanation =
        majority[rng.bounded(majority.size())]->explanation;
  }
  return outcome;
}

SessionTranscript DebateEngine::run_session(const EvaluationRecord& record,
                                            const DebateConfig& config,
                                            int session_index) {
  record.validate();
  config.validate();

  SessionTranscript transcript;
  transcript.session_id = session_index;
  transcript.record_id = record.record_id;
  transcript.config_snapshot = config;
  transcript.session_seed = derive_seed(
      config.master_seed,
      {kSessionStream, static_cast<std::uint64_t>(session_index)});
  transcript.stances = assign_stances(config, transcript.session_seed);

  const GuidelineSet& guidelines =
      options_.guidelines ? *options_.guidelines : default_guidelines();

  std::optional<FaithfulnessLabel> consensus;
  for (int round = 1; round <= config.max_rounds; ++round) {
    RoundResult result =
        run_round(record, config, transcript, round, guidelines);
    transcript.rounds.push_back(std::move(result.arguments));
    transcript.invalid_agents.push_back(result.invalid);
    if (!transcript.invalid_agents.back().empty()) {
      transcript.degraded = true;
      std::string note = "round " + std::to_string(round) + ": excluded";
      for (int agent : transcript.invalid_agents.back()) {
        note += " agent " + std::to_string(agent);
      }
      note += " after unparseable responses";
      transcript.notes.push_back(std::move(note));
    }
    consensus = check_consensus(transcript.rounds.back());
    if (consensus) {
      transcript.outcome.kind = SessionOutcome::Kind::Consensus;
      transcript.outcome.label = *consensus;
      transcript.outcome.at_round = round;
      break;
    }
  }
  if (!consensus) {
    transcript.outcome = adjudicate(record, config, transcript, guidelines);
  }

  for (int agent = 0; agent < config.num_agents; ++agent) {
    bool found = false;
    for (auto it = transcript.rounds.rbegin();
         it != transcript.rounds.rend() && !found; ++it) {
      for (const auto& argument : *it) {
        if (argument.agent_id == agent) {
          transcript.per_agent_final.emplace_back(agent, argument.label);
          found = true;
          break;
        }
      }
    }
    if (!found) {
      transcript.degraded = true;
      transcript.notes.push_back("agent " + std::to_string(agent) +
                                 " never produced a valid argument");
    }
  }

  transcript.validate();
  if (options_.run_log) {
    options_.run_log->append(record.record_id, "debate", transcript.to_json());
  }
  return transcript;
}

AggregateOutcome DebateEngine::run_simultaneous(const EvaluationRecord& record,
                                                const DebateConfig& config) {
  config.validate();
  int m = config.num_sessions;

  AggregateOutcome aggregate;
  aggregate.mode = config.aggregation;
  aggregate.sessions.resize(static_cast<std::size_t>(m));
  parallel_for(m, options_.parallel, [&](int session) {
    aggregate.sessions[static_cast<std::size_t>(session)] =
        run_session(record, config, session);
  });

  int count_faithful = 0;
  int count_unfaithful = 0;
  auto tally = [&](FaithfulnessLabel label) {
    if (label == FaithfulnessLabel::Faithful) {
      ++count_faithful;
    } else {
      ++count_unfaithful;
    }
  };
  switch (config.aggregation) {
    case Aggregation::DebateVote:
    case Aggregation::SingleSession:
      for (const auto& session : aggregate.sessions) {
        tally(session.outcome.label);
      }
      break;
    case Aggregation::AgentVote:
      for (const auto& session : aggregate.sessions) {
        for (const auto& [agent_id, label] : session.per_agent_final) {
          tally(label);
        }
      }
      break;
  }
  aggregate.vote_tally = {count_faithful, count_unfaithful};
  aggregate.final_label =
      majority_or_tie(count_faithful, count_unfaithful, aggregate.tie_broken);
  if (config.aggregation == Aggregation::SingleSession) {
    aggregate.tie_broken = false;
  }
  return aggregate;
}

}  // namespace faithdebate
