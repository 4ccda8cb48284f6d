#ifndef FAITHDEBATE_RUNNER_HPP
#define FAITHDEBATE_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "faithdebate/ambiguity.hpp"
#include "faithdebate/dataset.hpp"
#include "faithdebate/domain.hpp"
#include "faithdebate/gateway.hpp"
#include "json.hpp"

namespace faithdebate {

enum class EvaluatorKind { Debate, ZeroShot, ChainOfThought, SelfConsistency };

const char* evaluator_kind_name(EvaluatorKind kind);
EvaluatorKind evaluator_kind_from_name(const std::string& name);

// One validated run configuration; every command consumes one of these. The
// JSON form doubles as the config snapshot written into the run directory,
// which replays the run exactly against the scripted backend.
struct RunConfig {
  std::string run_id;  // "<command>-seed<seed>" when empty
  std::uint64_t seed = 0;
  bool seed_set = false;  // seeds are mandatory; no wall-clock fallback
  std::string out_dir = "out";

  std::string dataset_path;
  DatasetAdapter adapter = DatasetAdapter::Canonical;
  std::optional<Granularity> granularity;  // unset = all records
  std::optional<std::string> ambiguity_annotations;
  std::optional<int> limit;

  struct Backend {
    std::string kind = "scripted";  // "scripted" | "http"
    std::string script_path;
    nlohmann::json script_inline;  // alternative to script_path
    HttpBackendConfig http;
    double temperature = 1.0;  // sampled calls
    double single_shot_temperature = 0.0;
    int max_tokens = 1024;
    int max_in_flight = 4;
    int max_per_minute = 600;
  } backend;

  EvaluatorKind evaluator = EvaluatorKind::Debate;
  int self_consistency_n = 40;
  DebateConfig debate;

  AmbiguityMethod ambiguity_method = AmbiguityMethod::DebateArguments;
  int ambiguity_n_queries = 41;
  double ambiguity_threshold_pts = 20.0;
  std::optional<std::string> transcripts_path;

  std::optional<std::string> guidelines_path;
  int stagnation_window = 10;

  std::optional<std::string> predictions_path;  // report command input
  std::optional<std::string> verdicts_path;     // report filtering source

  bool parallel = false;
  int records_in_flight = 1;
  bool fail_fast = false;

  static RunConfig from_json(const nlohmann::json& doc);
  nlohmann::ordered_json to_json() const;
  void validate_paths() const;  // referenced inputs must exist
};

struct CommandResult {
  int exit_code = 0;
  nlohmann::ordered_json summary;
  std::string table;  // human-readable report, empty when not applicable
};

// Runs the configured evaluator over every record, writing predictions,
// transcripts (debate only), metrics and the config snapshot under
// <out_dir>/runs/<run_id>/. Exit code 0 iff every record got a verdict.
CommandResult cmd_evaluate(const RunConfig& config);

// Per-record ambiguity verdicts; reports detector balanced accuracy against
// gold annotations when they exist.
CommandResult cmd_ambiguity(const RunConfig& config);

// Guideline learning over a labeled dev set; exports the versioned set.
CommandResult cmd_learn_guidelines(const RunConfig& config);

// Metrics over stored predictions, with pre/post ambiguity filtering when a
// verdict source is available.
CommandResult cmd_report(const RunConfig& config);

// Stored run-log entries in write order.
CommandResult cmd_replay(const std::string& out_dir,
                         const std::string& run_id);

}  // namespace faithdebate

#endif  // FAITHDEBATE_RUNNER_HPP
