#include "faithdebate/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>

#include "faithdebate/baselines.hpp"
#include "faithdebate/debate.hpp"
#include "faithdebate/errors.hpp"
#include "faithdebate/guidelines.hpp"
#include "faithdebate/metrics.hpp"
#include "faithdebate/parallel.hpp"
#include "faithdebate/runlog.hpp"
#include "faithdebate/taxonomy.hpp"

namespace faithdebate {

namespace fs = std::filesystem;

const char* evaluator_kind_name(EvaluatorKind kind) {
  switch (kind) {
    case EvaluatorKind::Debate: return "debate";
    case EvaluatorKind::ZeroShot: return "zero_shot";
    case EvaluatorKind::ChainOfThought: return "chain_of_thought";
    case EvaluatorKind::SelfConsistency: return "self_consistency";
  }
  return "unknown";
}

EvaluatorKind evaluator_kind_from_name(const std::string& name) {
  if (name == "debate") return EvaluatorKind::Debate;
  if (name == "zero_shot") return EvaluatorKind::ZeroShot;
  if (name == "chain_of_thought") return EvaluatorKind::ChainOfThought;
  if (name == "self_consistency") return EvaluatorKind::SelfConsistency;
  raise(ErrorCode::InvalidArgument, "unknown evaluator: " + name);
}

RunConfig RunConfig::from_json(const nlohmann::json& doc) {
  RunConfig config;
  if (!doc.is_object()) {
    raise(ErrorCode::InvalidConfig, "run config must be a JSON object");
  }
  if (!doc.contains("seed")) {
    raise(ErrorCode::InvalidConfig,
          "run config needs an explicit seed (no wall-clock seeding)");
  }
  config.seed = doc["seed"].get<std::uint64_t>();
  config.seed_set = true;
  config.run_id = doc.value("run_id", "");
  config.out_dir = doc.value("out_dir", config.out_dir);

  if (doc.contains("dataset")) {
    const auto& d = doc["dataset"];
    config.dataset_path = d.value("path", "");
    if (d.contains("adapter")) {
      config.adapter =
          dataset_adapter_from_name(d["adapter"].get<std::string>());
    }
    if (d.contains("granularity") && !d["granularity"].is_null()) {
      config.granularity =
          granularity_from_name(d["granularity"].get<std::string>());
    }
    if (d.contains("limit") && !d["limit"].is_null()) {
      config.limit = d["limit"].get<int>();
    }
  }
  if (doc.contains("ambiguity_annotations") &&
      !doc["ambiguity_annotations"].is_null()) {
    config.ambiguity_annotations =
        doc["ambiguity_annotations"].get<std::string>();
  }

  if (doc.contains("backend")) {
    const auto& b = doc["backend"];
    config.backend.kind = b.value("kind", config.backend.kind);
    config.backend.script_path = b.value("script", "");
    if (b.contains("script_inline")) {
      config.backend.script_inline = b["script_inline"];
    }
    config.backend.http.base_url = b.value("base_url", "");
    config.backend.http.model = b.value("model", "");
    config.backend.http.completions_path =
        b.value("completions_path", config.backend.http.completions_path);
    config.backend.http.api_key_env =
        b.value("api_key_env", config.backend.http.api_key_env);
    config.backend.http.timeout_s =
        b.value("timeout_s", config.backend.http.timeout_s);
    config.backend.http.retries =
        b.value("retries", config.backend.http.retries);
    config.backend.http.backoff_ms =
        b.value("backoff_ms", config.backend.http.backoff_ms);
    config.backend.temperature =
        b.value("temperature", config.backend.temperature);
    config.backend.single_shot_temperature = b.value(
        "single_shot_temperature", config.backend.single_shot_temperature);
    config.backend.max_tokens =
        b.value("max_tokens", config.backend.max_tokens);
    config.backend.max_in_flight =
        b.value("max_in_flight", config.backend.max_in_flight);
    config.backend.max_per_minute =
        b.value("max_per_minute", config.backend.max_per_minute);
  }

  if (doc.contains("evaluator")) {
    const auto& e = doc["evaluator"];
    if (e.is_string()) {
      config.evaluator = evaluator_kind_from_name(e.get<std::string>());
    } else {
      config.evaluator =
          evaluator_kind_from_name(e.value("kind", "debate"));
      config.self_consistency_n =
          e.value("self_consistency_n", config.self_consistency_n);
    }
  }

  if (doc.contains("debate")) {
    config.debate = debate_config_from_json(doc["debate"]);
  }
  config.debate.master_seed = config.seed;
  config.debate.validate();

  if (doc.contains("ambiguity")) {
    const auto& a = doc["ambiguity"];
    if (a.contains("method")) {
      config.ambiguity_method =
          ambiguity_method_from_name(a["method"].get<std::string>());
    }
    config.ambiguity_n_queries =
        a.value("n_queries", config.ambiguity_n_queries);
    config.ambiguity_threshold_pts =
        a.value("threshold_pts", config.ambiguity_threshold_pts);
    if (a.contains("transcripts") && !a["transcripts"].is_null()) {
      config.transcripts_path = a["transcripts"].get<std::string>();
    }
  }

  if (doc.contains("guidelines")) {
    const auto& g = doc["guidelines"];
    if (g.contains("path") && !g["path"].is_null()) {
      config.guidelines_path = g["path"].get<std::string>();
    }
    config.stagnation_window =
        g.value("stagnation_window", config.stagnation_window);
  }

  if (doc.contains("predictions") && !doc["predictions"].is_null()) {
    config.predictions_path = doc["predictions"].get<std::string>();
  }
  if (doc.contains("verdicts") && !doc["verdicts"].is_null()) {
    config.verdicts_path = doc["verdicts"].get<std::string>();
  }

  config.parallel = doc.value("parallel", config.parallel);
  config.records_in_flight =
      doc.value("records_in_flight", config.records_in_flight);
  config.fail_fast = doc.value("fail_fast", config.fail_fast);
  if (config.records_in_flight < 1) {
    raise(ErrorCode::InvalidConfig, "records_in_flight must be >= 1");
  }
  return config;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["run_id"] = run_id;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["dataset"] = {{"path", dataset_path},
                  {"adapter", dataset_adapter_name(adapter)}};
  if (granularity) {
    j["dataset"]["granularity"] = granularity_name(*granularity);
  }
  if (limit) j["dataset"]["limit"] = *limit;
  if (ambiguity_annotations) {
    j["ambiguity_annotations"] = *ambiguity_annotations;
  }
  j["backend"] = {{"kind", backend.kind},
                  {"temperature", backend.temperature},
                  {"single_shot_temperature", backend.single_shot_temperature},
                  {"max_tokens", backend.max_tokens},
                  {"max_in_flight", backend.max_in_flight},
                  {"max_per_minute", backend.max_per_minute}};
  if (!backend.script_path.empty()) {
    j["backend"]["script"] = backend.script_path;
  }
  if (!backend.script_inline.is_null()) {
    j["backend"]["script_inline"] = backend.script_inline;
  }
  if (backend.kind == "http") {
    j["backend"]["base_url"] = backend.http.base_url;
    j["backend"]["model"] = backend.http.model;
    j["backend"]["completions_path"] = backend.http.completions_path;
    j["backend"]["api_key_env"] = backend.http.api_key_env;
    j["backend"]["timeout_s"] = backend.http.timeout_s;
    j["backend"]["retries"] = backend.http.retries;
  }
  j["evaluator"] = {{"kind", evaluator_kind_name(evaluator)},
                    {"self_consistency_n", self_consistency_n}};
  j["debate"] = debate_config_to_json(debate);
  j["ambiguity"] = {{"method", ambiguity_method_name(ambiguity_method)},
                    {"n_queries", ambiguity_n_queries},
                    {"threshold_pts", ambiguity_threshold_pts}};
  if (transcripts_path) j["ambiguity"]["transcripts"] = *transcripts_path;
  j["guidelines"] = {{"stagnation_window", stagnation_window}};
  if (guidelines_path) j["guidelines"]["path"] = *guidelines_path;
  if (predictions_path) j["predictions"] = *predictions_path;
  if (verdicts_path) j["verdicts"] = *verdicts_path;
  j["parallel"] = parallel;
  j["records_in_flight"] = records_in_flight;
  j["fail_fast"] = fail_fast;
  return j;
}

void RunConfig::validate_paths() const {
  auto must_exist = [](const std::string& path, const char* what) {
    if (!path.empty() && !fs::exists(path)) {
      raise(ErrorCode::InvalidConfig,
            std::string(what) + " does not exist: " + path);
    }
  };
  must_exist(dataset_path, "dataset path");
  must_exist(backend.script_path, "scripted backend spec");
  if (ambiguity_annotations) {
    must_exist(*ambiguity_annotations, "annotation file");
  }
  if (transcripts_path) must_exist(*transcripts_path, "transcripts file");
  if (guidelines_path) must_exist(*guidelines_path, "guideline set");
  if (predictions_path) must_exist(*predictions_path, "predictions file");
  if (verdicts_path) must_exist(*verdicts_path, "verdicts file");
}

namespace {

std::shared_ptr<Gateway> build_gateway(const RunConfig& config, RunLog* log) {
  std::shared_ptr<Gateway> backend;
  if (config.backend.kind == "scripted") {
    if (!config.backend.script_path.empty()) {
      backend = ScriptedBackend::from_file(config.backend.script_path);
    } else if (!config.backend.script_inline.is_null()) {
      backend = ScriptedBackend::from_json(config.backend.script_inline);
    } else {
      raise(ErrorCode::InvalidConfig,
            "scripted backend needs 'script' or 'script_inline'");
    }
  } else if (config.backend.kind == "http") {
    backend = std::make_shared<HttpBackend>(config.backend.http);
  } else {
    raise(ErrorCode::InvalidConfig,
          "unknown backend kind: " + config.backend.kind);
  }
  backend->set_run_log(log);
  return std::make_shared<RateLimitedGateway>(backend,
                                              config.backend.max_in_flight,
                                              config.backend.max_per_minute);
}

std::vector<EvaluationRecord> load_records(const RunConfig& config) {
  if (config.dataset_path.empty()) {
    raise(ErrorCode::InvalidConfig, "no dataset path configured");
  }
  std::vector<EvaluationRecord> records =
      ingest(config.dataset_path, config.adapter);
  if (config.ambiguity_annotations) {
    join_ambiguity(records, *config.ambiguity_annotations);
  }
  if (config.granularity) {
    records = filter_granularity(records, *config.granularity);
  }
  if (config.limit && static_cast<int>(records.size()) > *config.limit) {
    records.resize(static_cast<std::size_t>(*config.limit));
  }
  return records;
}

std::string default_run_id(const RunConfig& config, const char* command) {
  if (!config.run_id.empty()) return config.run_id;
  return std::string(command) + "-seed" + std::to_string(config.seed);
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) {
    raise(ErrorCode::IoError, "cannot write " + path.string());
  }
  out << content;
  if (!out) {
    raise(ErrorCode::IoError, "write failed for " + path.string());
  }
}

// Processes records with at most records_in_flight running at once while
// keeping outputs in record order.
template <typename F>
void for_each_record(int count, int in_flight, F&& f) {
  for (int begin = 0; begin < count; begin += in_flight) {
    int chunk = std::min(in_flight, count - begin);
    parallel_for(chunk, in_flight > 1,
                 [&](int offset) { f(begin + offset); });
  }
}

GuidelineSet active_guidelines(const RunConfig& config) {
  if (config.guidelines_path) {
    return GuidelineSet::from_file(*config.guidelines_path);
  }
  return default_guidelines();
}

struct BAccSummary {
  int scored = 0;
  std::optional<double> bacc;
};

// Detector balanced accuracy against gold ambiguity annotations
// (positive = ambiguous).
BAccSummary ambiguity_bacc(const std::vector<EvaluationRecord>& records,
                           const std::vector<std::optional<bool>>& verdicts) {
  ConfusionCounts counts;
  BAccSummary summary;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].gold_ambiguity || !verdicts[i]) continue;
    ++summary.scored;
    bool gold = records[i].gold_ambiguity->is_ambiguous;
    bool pred = *verdicts[i];
    if (pred && gold) {
      ++counts.tp;
    } else if (pred && !gold) {
      ++counts.fp;
    } else if (!pred && gold) {
      ++counts.fn;
    } else {
      ++counts.tn;
    }
  }
  if (summary.scored > 0 && counts.fp + counts.tn > 0 &&
      counts.fn + counts.tp > 0) {
    summary.bacc = balanced_accuracy(counts);
  }
  return summary;
}

std::map<std::string, SessionTranscript> load_transcripts(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open transcripts file: " + path);
  }
  std::map<std::string, SessionTranscript> by_record;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded()) {
      raise(ErrorCode::SchemaError, path + ":" + std::to_string(line_no) +
                                        ": invalid JSON");
    }
    SessionTranscript transcript = SessionTranscript::from_json(doc);
    // Detection runs on the first stored session of each record.
    auto it = by_record.find(transcript.record_id);
    if (it == by_record.end() ||
        transcript.session_id < it->second.session_id) {
      by_record[transcript.record_id] = std::move(transcript);
    }
  }
  return by_record;
}

}  // namespace

CommandResult cmd_evaluate(const RunConfig& config) {
  config.validate_paths();
  std::vector<EvaluationRecord> records = load_records(config);
  std::string run_id = default_run_id(config, "evaluate");

  RunLog log(config.out_dir + "/runs", run_id, config.to_json());
  std::shared_ptr<Gateway> gateway = build_gateway(config, &log);
  GuidelineSet guidelines = active_guidelines(config);

  int count = static_cast<int>(records.size());
  std::vector<nlohmann::ordered_json> predictions(
      static_cast<std::size_t>(count));
  std::vector<std::string> transcripts(static_cast<std::size_t>(count));
  std::vector<std::optional<FaithfulnessLabel>> labels(
      static_cast<std::size_t>(count));
  std::vector<std::string> failures(static_cast<std::size_t>(count));

  for_each_record(count, config.records_in_flight, [&](int i) {
    const EvaluationRecord& record = records[static_cast<std::size_t>(i)];
    nlohmann::ordered_json line;
    line["record_id"] = record.record_id;
    line["evaluator"] = evaluator_kind_name(config.evaluator);
    try {
      switch (config.evaluator) {
        case EvaluatorKind::Debate: {
          ExecutionOptions exec;
          exec.parallel = config.parallel;
          exec.run_log = &log;
          exec.guidelines = &guidelines;
          exec.temperature = config.backend.temperature;
          exec.max_tokens = config.backend.max_tokens;
          DebateEngine engine(*gateway, exec);
          AggregateOutcome aggregate =
              engine.run_simultaneous(record, config.debate);
          line["prediction"] = label_to_wire(aggregate.final_label);
          line["vote_tally"] = {aggregate.vote_tally.first,
                                aggregate.vote_tally.second};
          line["tie_broken"] = aggregate.tie_broken;
          std::string transcript_lines;
          for (const auto& session : aggregate.sessions) {
            transcript_lines += session.to_json().dump();
            transcript_lines += '\n';
          }
          transcripts[static_cast<std::size_t>(i)] =
              std::move(transcript_lines);
          labels[static_cast<std::size_t>(i)] = aggregate.final_label;
          break;
        }
        case EvaluatorKind::ZeroShot:
        case EvaluatorKind::ChainOfThought: {
          BaselineOptions options;
          options.temperature = config.backend.temperature;
          options.single_shot_temperature =
              config.backend.single_shot_temperature;
          options.max_tokens = config.backend.max_tokens;
          options.parallel = config.parallel;
          BaselineVerdict verdict =
              config.evaluator == EvaluatorKind::ZeroShot
                  ? zero_shot(*gateway, record, options)
                  : chain_of_thought(*gateway, record, options);
          line["prediction"] = label_to_wire(verdict.label);
          line["explanation"] = verdict.explanation;
          labels[static_cast<std::size_t>(i)] = verdict.label;
          break;
        }
        case EvaluatorKind::SelfConsistency: {
          BaselineOptions options;
          options.temperature = config.backend.temperature;
          options.max_tokens = config.backend.max_tokens;
          options.parallel = config.parallel;
          SelfConsistencyOutcome outcome = self_consistency(
              *gateway, record, config.self_consistency_n, options);
          int faithful = 0;
          for (auto label : outcome.samples) {
            if (label == FaithfulnessLabel::Faithful) ++faithful;
          }
          line["prediction"] = label_to_wire(outcome.majority);
          line["count_faithful"] = faithful;
          line["count_unfaithful"] =
              static_cast<int>(outcome.samples.size()) - faithful;
          line["tie_broken"] = outcome.tie_broken;
          labels[static_cast<std::size_t>(i)] = outcome.majority;
          break;
        }
      }
      if (record.gold_label) {
        line["gold"] = label_to_wire(*record.gold_label);
      }
    } catch (const Error& e) {
      if (config.fail_fast) throw;
      failures[static_cast<std::size_t>(i)] = e.what();
      line["error"] = e.what();
      line["error_code"] = error_code_name(e.code());
      nlohmann::ordered_json payload;
      payload["error"] = e.what();
      payload["error_code"] = error_code_name(e.code());
      log.append(record.record_id, "evaluate", std::move(payload));
    }
    predictions[static_cast<std::size_t>(i)] = std::move(line);
  });

  fs::path run_dir = fs::path(config.out_dir) / "runs" / run_id;
  std::string prediction_text;
  for (const auto& line : predictions) {
    prediction_text += line.dump();
    prediction_text += '\n';
  }
  write_text(run_dir / "predictions.jsonl", prediction_text);
  if (config.evaluator == EvaluatorKind::Debate) {
    std::string transcript_text;
    for (const auto& chunk : transcripts) transcript_text += chunk;
    write_text(run_dir / "transcripts.jsonl", transcript_text);
  }

  int failed = 0;
  for (const auto& failure : failures) {
    if (!failure.empty()) ++failed;
  }

  CommandResult result;
  result.summary["run_id"] = run_id;
  result.summary["run_dir"] = run_dir.string();
  result.summary["records"] = count;
  result.summary["failed"] = failed;

  std::vector<FaithfulnessLabel> scored_preds;
  std::vector<FaithfulnessLabel> scored_golds;
  for (int i = 0; i < count; ++i) {
    const auto& record = records[static_cast<std::size_t>(i)];
    const auto& label = labels[static_cast<std::size_t>(i)];
    if (label && record.gold_label) {
      scored_preds.push_back(*label);
      scored_golds.push_back(*record.gold_label);
    }
  }
  if (!scored_preds.empty()) {
    MetricsReport report = compute_metrics(scored_preds, scored_golds);
    write_text(run_dir / "metrics.json", report.to_json().dump(2) + "\n");
    result.table = render_metrics_table(report);
    write_text(run_dir / "metrics.txt", result.table);
    result.summary["metrics"] = report.to_json();
  }
  result.exit_code = failed == 0 ? 0 : 1;
  return result;
}

CommandResult cmd_ambiguity(const RunConfig& config) {
  config.validate_paths();
  std::vector<EvaluationRecord> records = load_records(config);
  std::string run_id = default_run_id(config, "ambiguity");

  RunLog log(config.out_dir + "/runs", run_id, config.to_json());
  bool needs_gateway =
      config.ambiguity_method != AmbiguityMethod::DebateDisagreement &&
      config.ambiguity_method != AmbiguityMethod::RandomBaseline;
  bool needs_transcripts =
      config.ambiguity_method == AmbiguityMethod::DebateDisagreement ||
      config.ambiguity_method == AmbiguityMethod::DebateArguments;

  std::shared_ptr<Gateway> gateway;
  if (needs_gateway ||
      (needs_transcripts && !config.transcripts_path)) {
    gateway = build_gateway(config, &log);
  }
  GuidelineSet guidelines = active_guidelines(config);
  AmbiguityTaxonomy taxonomy = AmbiguityTaxonomy::builtin();

  std::map<std::string, SessionTranscript> stored;
  if (needs_transcripts && config.transcripts_path) {
    stored = load_transcripts(*config.transcripts_path);
  }

  AmbiguityOptions options;
  options.temperature = config.backend.temperature;
  options.single_shot_temperature = config.backend.single_shot_temperature;
  options.max_tokens = config.backend.max_tokens;
  options.parallel = config.parallel;

  int count = static_cast<int>(records.size());
  std::vector<nlohmann::ordered_json> lines(static_cast<std::size_t>(count));
  std::vector<std::optional<bool>> verdicts(static_cast<std::size_t>(count));
  std::vector<std::string> failures(static_cast<std::size_t>(count));
  std::string transcript_text;
  std::mutex transcript_mutex;

  for_each_record(count, config.records_in_flight, [&](int i) {
    const EvaluationRecord& record = records[static_cast<std::size_t>(i)];
    try {
      AmbiguityVerdict verdict;
      switch (config.ambiguity_method) {
        case AmbiguityMethod::SelfConsistencyVariation:
          verdict = detect_self_consistency_variation(
              *gateway, record, config.ambiguity_n_queries,
              config.ambiguity_threshold_pts, options);
          break;
        case AmbiguityMethod::ZeroShotTaxonomy:
          verdict =
              detect_zero_shot_taxonomy(*gateway, record, taxonomy, options);
          break;
        case AmbiguityMethod::DebateDisagreement:
        case AmbiguityMethod::DebateArguments: {
          SessionTranscript transcript;
          auto it = stored.find(record.record_id);
          if (it != stored.end()) {
            transcript = it->second;
          } else if (config.transcripts_path) {
            raise(ErrorCode::MissingTranscripts,
                  "no stored transcript for record " + record.record_id);
          } else {
            ExecutionOptions exec;
            exec.parallel = config.parallel;
            exec.run_log = &log;
            exec.guidelines = &guidelines;
            exec.temperature = config.backend.temperature;
            exec.max_tokens = config.backend.max_tokens;
            DebateEngine engine(*gateway, exec);
            transcript = engine.run_session(record, config.debate, 0);
            std::lock_guard<std::mutex> lock(transcript_mutex);
            transcript_text += transcript.to_json().dump();
            transcript_text += '\n';
          }
          verdict =
              config.ambiguity_method == AmbiguityMethod::DebateDisagreement
                  ? detect_debate_disagreement(transcript)
                  : detect_with_debate_arguments(*gateway, record, transcript,
                                                 taxonomy, guidelines,
                                                 options);
          break;
        }
        case AmbiguityMethod::RandomBaseline:
          verdict = detect_random_baseline(record, config.seed);
          break;
      }
      verdicts[static_cast<std::size_t>(i)] = verdict.is_ambiguous;
      nlohmann::ordered_json line = verdict.to_json();
      if (record.gold_ambiguity) {
        line["gold_is_ambiguous"] = record.gold_ambiguity->is_ambiguous;
      }
      lines[static_cast<std::size_t>(i)] = std::move(line);
      log.append(record.record_id, "ambiguity", verdict.to_json());
    } catch (const Error& e) {
      if (config.fail_fast) throw;
      failures[static_cast<std::size_t>(i)] = e.what();
      nlohmann::ordered_json line;
      line["record_id"] = record.record_id;
      line["error"] = e.what();
      line["error_code"] = error_code_name(e.code());
      lines[static_cast<std::size_t>(i)] = std::move(line);
    }
  });

  fs::path run_dir = fs::path(config.out_dir) / "runs" / run_id;
  std::string verdict_text;
  for (const auto& line : lines) {
    verdict_text += line.dump();
    verdict_text += '\n';
  }
  write_text(run_dir / "verdicts.jsonl", verdict_text);
  if (!transcript_text.empty()) {
    write_text(run_dir / "transcripts.jsonl", transcript_text);
  }

  int failed = 0;
  int ambiguous = 0;
  for (int i = 0; i < count; ++i) {
    if (!failures[static_cast<std::size_t>(i)].empty()) ++failed;
    if (verdicts[static_cast<std::size_t>(i)].value_or(false)) ++ambiguous;
  }

  CommandResult result;
  result.summary["run_id"] = run_id;
  result.summary["run_dir"] = run_dir.string();
  result.summary["records"] = count;
  result.summary["ambiguous"] = ambiguous;
  result.summary["failed"] = failed;
  BAccSummary bacc = ambiguity_bacc(records, verdicts);
  if (bacc.scored > 0) {
    result.summary["gold_scored"] = bacc.scored;
    if (bacc.bacc) {
      result.summary["detector_bacc"] = *bacc.bacc;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "detector BAcc (%%)  %12.2f\n",
                    *bacc.bacc * 100.0);
      result.table = buf;
    }
  }
  result.exit_code = failed == 0 ? 0 : 1;
  return result;
}

CommandResult cmd_learn_guidelines(const RunConfig& config) {
  config.validate_paths();
  std::vector<EvaluationRecord> records = load_records(config);
  if (records.empty()) {
    raise(ErrorCode::InvalidArgument,
          "guideline learning needs a non-empty dev set");
  }
  std::string run_id = default_run_id(config, "learn");

  RunLog log(config.out_dir + "/runs", run_id, config.to_json());
  std::shared_ptr<Gateway> gateway = build_gateway(config, &log);
  GuidelineSet initial = active_guidelines(config);
  std::size_t initial_size = initial.size();

  LearnOptions options;
  options.stagnation_window = config.stagnation_window;
  options.parallel = config.parallel;
  options.run_log = &log;
  GuidelineSet learned = learn_guidelines(records, config.debate,
                                          std::move(initial), *gateway,
                                          options);
  learned.set_version(run_id);

  fs::path run_dir = fs::path(config.out_dir) / "runs" / run_id;
  learned.save((run_dir / "guidelines.json").string());

  CommandResult result;
  result.summary["run_id"] = run_id;
  result.summary["run_dir"] = run_dir.string();
  result.summary["initial_size"] = initial_size;
  result.summary["final_size"] = learned.size();
  result.summary["exported"] = (run_dir / "guidelines.json").string();
  return result;
}

CommandResult cmd_report(const RunConfig& config) {
  config.validate_paths();
  if (!config.predictions_path) {
    raise(ErrorCode::InvalidConfig, "report needs a predictions file");
  }
  std::vector<EvaluationRecord> records = load_records(config);

  std::map<std::string, FaithfulnessLabel> predictions;
  {
    std::ifstream in(*config.predictions_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
      if (doc.is_discarded()) {
        raise(ErrorCode::SchemaError,
              *config.predictions_path + ":" + std::to_string(line_no) +
                  ": invalid JSON");
      }
      if (!doc.contains("prediction")) continue;  // errored record
      predictions[doc.at("record_id").get<std::string>()] =
          wire_to_label(doc.at("prediction").get<int>());
    }
  }

  std::map<std::string, bool> verdict_map;
  if (config.verdicts_path) {
    std::ifstream in(*config.verdicts_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
      if (doc.is_discarded() || !doc.contains("is_ambiguous")) continue;
      verdict_map[doc.at("record_id").get<std::string>()] =
          doc.at("is_ambiguous").get<bool>();
    }
  }

  std::vector<EvaluationRecord> scored_records;
  std::vector<FaithfulnessLabel> preds;
  for (const auto& record : records) {
    auto it = predictions.find(record.record_id);
    if (it == predictions.end() || !record.gold_label) continue;
    scored_records.push_back(record);
    preds.push_back(it->second);
  }
  if (scored_records.empty()) {
    raise(ErrorCode::InvalidArgument,
          "no scored records: predictions and gold labels never align");
  }

  auto verdict_source =
      [&](const EvaluationRecord& record) -> std::optional<bool> {
    auto it = verdict_map.find(record.record_id);
    if (it != verdict_map.end()) return it->second;
    return gold_ambiguity_verdict(record);
  };

  bool any_verdict = false;
  for (const auto& record : scored_records) {
    if (verdict_source(record)) {
      any_verdict = true;
      break;
    }
  }

  CommandResult result;
  fs::path out_dir = fs::path(config.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (any_verdict) {
    FilteredReport report =
        filtered_report(scored_records, preds, verdict_source);
    result.table = render_filtered_table(report);
    result.summary["report"] = report.to_json();
    write_text(out_dir / "report.json", report.to_json().dump(2) + "\n");
  } else {
    std::vector<FaithfulnessLabel> golds;
    for (const auto& record : scored_records) {
      golds.push_back(*record.gold_label);
    }
    MetricsReport report = compute_metrics(preds, golds);
    result.table = render_metrics_table(report);
    result.summary["report"] = report.to_json();
    write_text(out_dir / "report.json", report.to_json().dump(2) + "\n");
  }
  result.summary["scored"] = scored_records.size();
  write_text(out_dir / "report.txt", result.table);
  return result;
}

CommandResult cmd_replay(const std::string& out_dir,
                         const std::string& run_id) {
  std::vector<RunLogEntry> entries =
      replay_runlog(out_dir + "/runs", run_id);
  CommandResult result;
  result.summary["run_id"] = run_id;
  result.summary["entries"] = nlohmann::ordered_json::array();
  for (const auto& entry : entries) {
    nlohmann::ordered_json j;
    j["run_id"] = entry.run_id;
    j["timestamp"] = entry.timestamp;
    j["record_id"] = entry.record_id;
    j["component"] = entry.component;
    j["payload"] = entry.payload;
    result.summary["entries"].push_back(std::move(j));
  }
  result.summary["count"] = entries.size();
  return result;
}

}  // namespace faithdebate
