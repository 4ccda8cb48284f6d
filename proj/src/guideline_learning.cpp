#include <map>
#include <mutex>

#include "faithdebate/debate.hpp"
#include "faithdebate/errors.hpp"
#include "faithdebate/guidelines.hpp"
#include "faithdebate/prompting.hpp"
#include "faithdebate/runlog.hpp"

namespace faithdebate {

GuidelineSet learn_guidelines(const std::vector<EvaluationRecord>& dev_records,
                              const DebateConfig& config, GuidelineSet initial,
                              Gateway& gateway, const LearnOptions& options) {
  if (dev_records.empty()) {
    raise(ErrorCode::InvalidArgument,
          "guideline learning needs a non-empty dev set");
  }
  for (const auto& record : dev_records) {
    if (!record.gold_label) {
      raise(ErrorCode::InvalidArgument,
            "dev record " + record.record_id + " has no gold label");
    }
  }
  if (options.stagnation_window < 1) {
    raise(ErrorCode::InvalidConfig, "stagnation_window must be >= 1");
  }

  GuidelineSet pool = std::move(initial);
  std::optional<std::string> source_run;
  if (options.run_log) source_run = options.run_log->run_id();

  // Negations are produced once per distinct reported guideline.
  std::map<std::string, GuidelineEntry> negation_cache;

  int stagnant = 0;
  int record_index = 0;
  for (const auto& record : dev_records) {
    if (stagnant >= options.stagnation_window) break;

    // Collect each agent's reported guidelines across its valid rounds.
    std::map<int, std::vector<std::string>> reported;
    std::mutex reported_mutex;

    ExecutionOptions exec;
    exec.parallel = options.parallel;
    exec.run_log = options.run_log;
    exec.guidelines = &pool;
    exec.request_used_guidelines = true;
    exec.evaluator_observer = [&](int agent_id, int round,
                                  const std::string& text) {
      (void)round;
      std::vector<std::string> used = parse_used_guidelines(text);
      if (used.empty()) return;
      std::lock_guard<std::mutex> lock(reported_mutex);
      auto& list = reported[agent_id];
      list.insert(list.end(), used.begin(), used.end());
    };

    DebateEngine engine(gateway, exec);
    SessionTranscript transcript =
        engine.run_session(record, config, record_index);

    int added = 0;
    for (const auto& [agent_id, final_label] : transcript.per_agent_final) {
      auto it = reported.find(agent_id);
      if (it == reported.end()) continue;
      bool correct = final_label == *record.gold_label;
      for (const auto& text : it->second) {
        if (correct) {
          GuidelineEntry entry;
          entry.text = text;
          entry.provenance = GuidelineProvenance::LearnedPositive;
          entry.source_run = source_run;
          if (pool.add(std::move(entry))) ++added;
        } else {
          std::string key = normalize_guideline(text);
          auto cached = negation_cache.find(key);
          if (cached == negation_cache.end()) {
            GuidelineEntry negated = negate_guideline(
                gateway, text, "negate/" + record.record_id);
            negated.source_run = source_run;
            cached = negation_cache.emplace(key, std::move(negated)).first;
          }
          if (pool.add(cached->second)) ++added;
        }
      }
    }
    stagnant = added == 0 ? stagnant + 1 : 0;
    if (options.run_log) {
      nlohmann::ordered_json payload;
      payload["record_index"] = record_index;
      payload["new_guidelines"] = added;
      payload["pool_size"] = pool.size();
      payload["stagnant_records"] = stagnant;
      options.run_log->append(record.record_id, "guideline_learning",
                              std::move(payload));
    }
    ++record_index;
  }
  return pool;
}

}  // namespace faithdebate
