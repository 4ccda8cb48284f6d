// Operator CLI. Builds a run-config JSON from a config file plus flags
// (flags win) and drives everything through the shared library's C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "faithdebate/faithdebate.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct Flags {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> run_id;
  std::optional<std::string> out_dir;

  std::optional<std::string> dataset;
  std::optional<std::string> adapter;
  std::optional<std::string> granularity;
  std::optional<int> limit;
  std::optional<std::string> annotations;

  std::optional<std::string> backend;
  std::optional<std::string> script;
  std::optional<std::string> base_url;
  std::optional<std::string> model;
  std::optional<std::string> api_key_env;
  std::optional<int> timeout_s;
  std::optional<int> retries;
  std::optional<double> temperature;
  std::optional<double> single_shot_temperature;
  std::optional<int> max_tokens;
  std::optional<int> max_in_flight;
  std::optional<int> max_per_minute;

  std::optional<std::string> evaluator;
  std::optional<int> sc_n;

  std::optional<int> agents;
  std::optional<std::vector<int>> split;
  std::optional<int> rounds;
  std::optional<int> adjudicators;
  std::optional<int> sessions;
  std::optional<std::string> aggregation;
  std::optional<int> intervention_round;

  std::optional<std::string> method;
  std::optional<int> n_queries;
  std::optional<double> threshold;
  std::optional<std::string> transcripts;

  std::optional<std::string> guidelines;
  std::optional<int> stagnation_window;

  std::optional<std::string> predictions;
  std::optional<std::string> verdicts;

  bool parallel = false;
  std::optional<int> records_in_flight;
  bool fail_fast = false;
};

void add_common_options(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_file,
                  "run config JSON file (flags override its keys)");
  cmd->add_option("--seed", flags.seed, "master seed (required)");
  cmd->add_option("--run-id", flags.run_id, "run identifier");
  cmd->add_option("--out", flags.out_dir, "output directory (default: out)");
  cmd->add_option("--dataset", flags.dataset, "dataset file");
  cmd->add_option("--adapter", flags.adapter,
                  "dataset adapter: canonical, tofueval_meetingbank, "
                  "tofueval_mediasum, aggrefact_cnn, aggrefact_xsum");
  cmd->add_option("--granularity", flags.granularity,
                  "record filter: summary or sentence");
  cmd->add_option("--limit", flags.limit, "use only the first N records");
  cmd->add_option("--annotations", flags.annotations,
                  "ambiguity annotation JSONL to join");
  cmd->add_option("--backend", flags.backend, "backend kind: scripted, http");
  cmd->add_option("--script", flags.script, "scripted backend spec JSON");
  cmd->add_option("--base-url", flags.base_url, "http backend base URL");
  cmd->add_option("--model", flags.model, "http backend model name");
  cmd->add_option("--api-key-env", flags.api_key_env,
                  "env var holding the API credential (empty = no auth)");
  cmd->add_option("--timeout", flags.timeout_s, "http timeout seconds");
  cmd->add_option("--retries", flags.retries, "http attempts per call");
  cmd->add_option("--temperature", flags.temperature,
                  "sampling temperature for debate/self-consistency calls");
  cmd->add_option("--single-shot-temperature", flags.single_shot_temperature,
                  "temperature for one-shot verdict calls");
  cmd->add_option("--max-tokens", flags.max_tokens, "completion token cap");
  cmd->add_option("--max-in-flight", flags.max_in_flight,
                  "concurrent request cap");
  cmd->add_option("--max-per-minute", flags.max_per_minute,
                  "requests-per-minute cap");
  cmd->add_option("--guidelines", flags.guidelines,
                  "guideline set JSON replacing the builtin defaults");
  cmd->add_flag("--parallel", flags.parallel,
                "run sessions/agents/samples concurrently");
  cmd->add_option("--records-in-flight", flags.records_in_flight,
                  "batch parallelism over records");
  cmd->add_flag("--fail-fast", flags.fail_fast,
                "abort the batch on the first per-record failure");
}

void add_debate_options(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--agents", flags.agents, "evaluator agents per session");
  cmd->add_option("--split", flags.split,
                  "stance split as faithful,unfaithful counts")
      ->expected(2)
      ->delimiter(',');
  cmd->add_option("--rounds", flags.rounds, "max debate rounds");
  cmd->add_option("--adjudicators", flags.adjudicators,
                  "adjudicator count (odd)");
  cmd->add_option("--sessions", flags.sessions, "simultaneous sessions");
  cmd->add_option("--aggregation", flags.aggregation,
                  "single_session, debate_vote or agent_vote");
  cmd->add_option("--intervention-round", flags.intervention_round,
                  "round from which the openness instruction applies");
}

json build_config(const Flags& flags) {
  json config = json::object();
  if (!flags.config_file.empty()) {
    std::ifstream in(flags.config_file);
    if (!in) {
      throw CLI::ValidationError("--config",
                                 "cannot open " + flags.config_file);
    }
    config = json::parse(in, nullptr, false);
    if (config.is_discarded()) {
      throw CLI::ValidationError("--config",
                                 flags.config_file + " is not valid JSON");
    }
  }
  auto set = [&config](const char* section, const char* key,
                       const json& value) {
    if (section) {
      config[section][key] = value;
    } else {
      config[key] = value;
    }
  };
  if (flags.seed) set(nullptr, "seed", *flags.seed);
  if (flags.run_id) set(nullptr, "run_id", *flags.run_id);
  if (flags.out_dir) set(nullptr, "out_dir", *flags.out_dir);
  if (flags.dataset) set("dataset", "path", *flags.dataset);
  if (flags.adapter) set("dataset", "adapter", *flags.adapter);
  if (flags.granularity) set("dataset", "granularity", *flags.granularity);
  if (flags.limit) set("dataset", "limit", *flags.limit);
  if (flags.annotations) {
    set(nullptr, "ambiguity_annotations", *flags.annotations);
  }
  if (flags.backend) set("backend", "kind", *flags.backend);
  if (flags.script) set("backend", "script", *flags.script);
  if (flags.base_url) set("backend", "base_url", *flags.base_url);
  if (flags.model) set("backend", "model", *flags.model);
  if (flags.api_key_env) set("backend", "api_key_env", *flags.api_key_env);
  if (flags.timeout_s) set("backend", "timeout_s", *flags.timeout_s);
  if (flags.retries) set("backend", "retries", *flags.retries);
  if (flags.temperature) set("backend", "temperature", *flags.temperature);
  if (flags.single_shot_temperature) {
    set("backend", "single_shot_temperature", *flags.single_shot_temperature);
  }
  if (flags.max_tokens) set("backend", "max_tokens", *flags.max_tokens);
  if (flags.max_in_flight) {
    set("backend", "max_in_flight", *flags.max_in_flight);
  }
  if (flags.max_per_minute) {
    set("backend", "max_per_minute", *flags.max_per_minute);
  }
  if (flags.evaluator) set("evaluator", "kind", *flags.evaluator);
  if (flags.sc_n) set("evaluator", "self_consistency_n", *flags.sc_n);
  if (flags.agents) set("debate", "num_agents", *flags.agents);
  if (flags.split) set("debate", "stance_split", *flags.split);
  if (flags.rounds) set("debate", "max_rounds", *flags.rounds);
  if (flags.adjudicators) {
    set("debate", "num_adjudicators", *flags.adjudicators);
  }
  if (flags.sessions) set("debate", "num_sessions", *flags.sessions);
  if (flags.aggregation) set("debate", "aggregation", *flags.aggregation);
  if (flags.intervention_round) {
    set("debate", "intervention_round", *flags.intervention_round);
  }
  if (flags.method) set("ambiguity", "method", *flags.method);
  if (flags.n_queries) set("ambiguity", "n_queries", *flags.n_queries);
  if (flags.threshold) set("ambiguity", "threshold_pts", *flags.threshold);
  if (flags.transcripts) set("ambiguity", "transcripts", *flags.transcripts);
  if (flags.guidelines) set("guidelines", "path", *flags.guidelines);
  if (flags.stagnation_window) {
    set("guidelines", "stagnation_window", *flags.stagnation_window);
  }
  if (flags.predictions) set(nullptr, "predictions", *flags.predictions);
  if (flags.verdicts) set(nullptr, "verdicts", *flags.verdicts);
  if (flags.parallel) set(nullptr, "parallel", true);
  if (flags.records_in_flight) {
    set(nullptr, "records_in_flight", *flags.records_in_flight);
  }
  if (flags.fail_fast) set(nullptr, "fail_fast", true);
  return config;
}

void print_error(const char* stage, fd_status status) {
  json error;
  error["error"] = fd_last_error();
  error["status"] = fd_status_name(status);
  error["stage"] = stage;
  std::cerr << error.dump() << "\n";
}

int run_command(const Flags& flags,
                fd_status (*command)(fd_run*, char**, int*),
                const char* stage) {
  json config = build_config(flags);
  fd_run* run = nullptr;
  fd_status status = fd_run_create(config.dump().c_str(), &run);
  if (status != FD_OK) {
    print_error("config", status);
    return 2;
  }
  char* summary = nullptr;
  int exit_code = 0;
  status = command(run, &summary, &exit_code);
  if (status != FD_OK) {
    print_error(stage, status);
    fd_run_destroy(run);
    return 2;
  }
  char* table = nullptr;
  if (fd_run_table(run, &table) == FD_OK && table && *table) {
    std::cout << table;
  }
  fd_string_free(table);
  std::cout << summary << "\n";
  fd_string_free(summary);
  fd_run_destroy(run);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "summary faithfulness evaluation through stance-initialized "
      "multi-agent debates, with ambiguity detection and metrics"};
  app.require_subcommand(1);

  Flags flags;

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "run an evaluator over a dataset and score it");
  add_common_options(evaluate, flags);
  add_debate_options(evaluate, flags);
  evaluate->add_option("--evaluator", flags.evaluator,
                       "debate, zero_shot, chain_of_thought or "
                       "self_consistency");
  evaluate->add_option("--sc-n", flags.sc_n, "self-consistency sample count");

  CLI::App* ambiguity = app.add_subcommand(
      "ambiguity", "detect ambiguous records and score against gold");
  add_common_options(ambiguity, flags);
  add_debate_options(ambiguity, flags);
  ambiguity->add_option("--method", flags.method,
                        "self_consistency_variation, zero_shot_taxonomy, "
                        "debate_disagreement, debate_arguments or "
                        "random_baseline");
  ambiguity->add_option("--n-queries", flags.n_queries,
                        "samples for the variation method");
  ambiguity->add_option("--threshold", flags.threshold,
                        "ambiguity gap threshold in percentage points");
  ambiguity->add_option("--transcripts", flags.transcripts,
                        "stored transcripts JSONL (pure replay)");

  CLI::App* learn = app.add_subcommand(
      "learn-guidelines", "incremental guideline learning over a dev set");
  add_common_options(learn, flags);
  add_debate_options(learn, flags);
  learn->add_option("--stagnation-window", flags.stagnation_window,
                    "stop after this many stagnant records");

  CLI::App* report = app.add_subcommand(
      "report", "metrics over stored predictions, with ambiguity filtering");
  add_common_options(report, flags);
  report->add_option("--predictions", flags.predictions,
                     "predictions JSONL from an evaluate run")
      ->required();
  report->add_option("--verdicts", flags.verdicts,
                     "ambiguity verdicts JSONL used for filtering");

  CLI::App* replay = app.add_subcommand(
      "replay", "dump a stored run log in write order");
  std::string replay_out = "out";
  std::string replay_run_id;
  replay->add_option("--out", replay_out, "output directory of the run");
  replay->add_option("--run-id", replay_run_id, "run identifier")->required();

  CLI11_PARSE(app, argc, argv);

  if (evaluate->parsed()) {
    return run_command(flags, fd_run_evaluate, "evaluate");
  }
  if (ambiguity->parsed()) {
    return run_command(flags, fd_run_ambiguity, "ambiguity");
  }
  if (learn->parsed()) {
    return run_command(flags, fd_run_learn_guidelines, "learn-guidelines");
  }
  if (report->parsed()) {
    return run_command(flags, fd_run_report, "report");
  }
  if (replay->parsed()) {
    char* entries = nullptr;
    fd_status status =
        fd_replay(replay_out.c_str(), replay_run_id.c_str(), &entries);
    if (status != FD_OK) {
      print_error("replay", status);
      return 2;
    }
    std::cout << entries << "\n";
    fd_string_free(entries);
    return 0;
  }
  return 0;
}
