#include "faithdebate/faithdebate.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "faithdebate/domain.hpp"
#include "faithdebate/errors.hpp"
#include "faithdebate/guidelines.hpp"
#include "faithdebate/metrics.hpp"
#include "faithdebate/prompting.hpp"
#include "faithdebate/runner.hpp"
#include "faithdebate/taxonomy.hpp"

using namespace faithdebate;

namespace {

thread_local std::string t_last_error;

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out) std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

fd_status to_status(ErrorCode code) {
  return static_cast<fd_status>(static_cast<int>(code));
}

template <typename F>
fd_status guarded(F&& f) {
  try {
    f();
    t_last_error.clear();
    return FD_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return FD_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return FD_ERR_INTERNAL;
  }
}

fd_status require(bool condition, const char* message) {
  if (condition) return FD_OK;
  t_last_error = message;
  return FD_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct fd_run {
  RunConfig config;
  std::string last_table;
};

namespace {

fd_status run_command(fd_run* run, char** summary_json, int* exit_code,
                      CommandResult (*command)(const RunConfig&)) {
  fd_status bad =
      require(run && summary_json, "command needs a run and summary output");
  if (bad != FD_OK) return bad;
  *summary_json = nullptr;
  return guarded([&] {
    CommandResult result = command(run->config);
    run->last_table = result.table;
    *summary_json = copy_string(result.summary.dump());
    if (exit_code) *exit_code = result.exit_code;
  });
}

}  // namespace

extern "C" {

const char* fd_version(void) { return "0.1.0"; }

const char* fd_status_name(fd_status status) {
  return error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
}

const char* fd_last_error(void) { return t_last_error.c_str(); }

void fd_string_free(char* text) { std::free(text); }

fd_status fd_run_create(const char* config_json, fd_run** out_run) {
  fd_status bad = require(config_json && out_run,
                          "fd_run_create needs config_json and out_run");
  if (bad != FD_OK) return bad;
  *out_run = nullptr;
  return guarded([&] {
    nlohmann::json doc = nlohmann::json::parse(config_json, nullptr, false);
    if (doc.is_discarded()) {
      raise(ErrorCode::InvalidConfig, "run config is not valid JSON");
    }
    auto run = std::make_unique<fd_run>();
    run->config = RunConfig::from_json(doc);
    *out_run = run.release();
  });
}

void fd_run_destroy(fd_run* run) { delete run; }

fd_status fd_run_evaluate(fd_run* run, char** summary_json, int* exit_code) {
  return run_command(run, summary_json, exit_code, cmd_evaluate);
}

fd_status fd_run_ambiguity(fd_run* run, char** summary_json, int* exit_code) {
  return run_command(run, summary_json, exit_code, cmd_ambiguity);
}

fd_status fd_run_learn_guidelines(fd_run* run, char** summary_json,
                                  int* exit_code) {
  return run_command(run, summary_json, exit_code, cmd_learn_guidelines);
}

fd_status fd_run_report(fd_run* run, char** summary_json, int* exit_code) {
  return run_command(run, summary_json, exit_code, cmd_report);
}

fd_status fd_run_table(fd_run* run, char** table_text) {
  fd_status bad = require(run && table_text, "fd_run_table needs outputs");
  if (bad != FD_OK) return bad;
  return guarded([&] { *table_text = copy_string(run->last_table); });
}

fd_status fd_replay(const char* out_dir, const char* run_id,
                    char** entries_json) {
  fd_status bad = require(out_dir && run_id && entries_json,
                          "fd_replay needs out_dir, run_id and output");
  if (bad != FD_OK) return bad;
  *entries_json = nullptr;
  return guarded([&] {
    CommandResult result = cmd_replay(out_dir, run_id);
    *entries_json = copy_string(result.summary.dump());
  });
}

fd_status fd_wire_label_name(int wire, const char** name) {
  fd_status bad = require(name != nullptr, "fd_wire_label_name needs output");
  if (bad != FD_OK) return bad;
  return guarded([&] { *name = label_name(wire_to_label(wire)); });
}

fd_status fd_confusion(const int* pred_wire, const int* gold_wire, size_t n,
                       uint64_t* tp, uint64_t* fp, uint64_t* tn,
                       uint64_t* fn) {
  fd_status bad = require(pred_wire && gold_wire && tp && fp && tn && fn,
                          "fd_confusion needs inputs and outputs");
  if (bad != FD_OK) return bad;
  return guarded([&] {
    std::vector<FaithfulnessLabel> preds;
    std::vector<FaithfulnessLabel> golds;
    preds.reserve(n);
    golds.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      preds.push_back(wire_to_label(pred_wire[i]));
      golds.push_back(wire_to_label(gold_wire[i]));
    }
    ConfusionCounts counts = confusion(preds, golds);
    *tp = counts.tp;
    *fp = counts.fp;
    *tn = counts.tn;
    *fn = counts.fn;
  });
}

fd_status fd_balanced_accuracy(uint64_t tp, uint64_t fp, uint64_t tn,
                               uint64_t fn, double* out) {
  fd_status bad = require(out != nullptr, "fd_balanced_accuracy needs output");
  if (bad != FD_OK) return bad;
  return guarded([&] {
    ConfusionCounts counts{tp, fp, tn, fn};
    *out = balanced_accuracy(counts);
  });
}

fd_status fd_krippendorff_alpha(const int* rater_a, const int* rater_b,
                                size_t n, double* out) {
  fd_status bad = require(rater_a && rater_b && out,
                          "fd_krippendorff_alpha needs inputs and output");
  if (bad != FD_OK) return bad;
  return guarded([&] {
    std::vector<int> a(rater_a, rater_a + n);
    std::vector<int> b(rater_b, rater_b + n);
    *out = krippendorff_alpha(a, b);
  });
}

fd_status fd_parse_argument(const char* text, char** argument_json) {
  fd_status bad = require(text && argument_json,
                          "fd_parse_argument needs input and output");
  if (bad != FD_OK) return bad;
  *argument_json = nullptr;
  return guarded([&] {
    Argument argument = parse_argument(text, 0, 1);
    nlohmann::ordered_json j;
    j["label"] = label_to_wire(argument.label);
    j["explanation"] = argument.explanation;
    if (argument.thinking) j["thinking"] = *argument.thinking;
    *argument_json = copy_string(j.dump());
  });
}

fd_status fd_default_guidelines(char** guidelines_json) {
  fd_status bad =
      require(guidelines_json != nullptr, "fd_default_guidelines needs output");
  if (bad != FD_OK) return bad;
  return guarded([&] {
    *guidelines_json = copy_string(default_guidelines().to_json().dump());
  });
}

fd_status fd_taxonomy(char** taxonomy_json) {
  fd_status bad = require(taxonomy_json != nullptr, "fd_taxonomy needs output");
  if (bad != FD_OK) return bad;
  return guarded([&] {
    *taxonomy_json =
        copy_string(AmbiguityTaxonomy::builtin().to_json().dump());
  });
}

}  // extern "C"
