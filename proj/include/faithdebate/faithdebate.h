/*
 * faithdebate C API.
 *
 * Summary-faithfulness evaluation through stance-initialized multi-agent
 * debates, single-LLM baselines, ambiguity detection and an
 * agreement/accuracy metrics suite, exposed as a C shared library.
 *
 * Conventions:
 *   - Every function returns an fd_status; FD_OK is success.
 *   - fd_last_error() returns a thread-local message for the most recent
 *     failure on the calling thread.
 *   - Strings returned through char** out-parameters are heap-allocated;
 *     release them with fd_string_free().
 *   - fd_run is an opaque handle over one validated run configuration
 *     (JSON; see docs/config.md for the schema).
 */
#ifndef FAITHDEBATE_FAITHDEBATE_H
#define FAITHDEBATE_FAITHDEBATE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fd_status {
  FD_OK = 0,
  FD_ERR_INVALID_ARGUMENT = 1,
  FD_ERR_INVALID_WIRE_LABEL = 2,
  FD_ERR_MISSING_CONTEXT = 3,
  FD_ERR_PARSE_FAILURE = 4,
  FD_ERR_BACKEND_UNAVAILABLE = 5,
  FD_ERR_AUTH = 6,
  FD_ERR_SCRIPTED_EXHAUSTED = 7,
  FD_ERR_INVALID_SPLIT = 8,
  FD_ERR_ALL_AGENTS_INVALID = 9,
  FD_ERR_ALL_ADJUDICATORS_INVALID = 10,
  FD_ERR_DEGRADED_SIGNAL = 11,
  FD_ERR_MISSING_VERDICT = 12,
  FD_ERR_MISSING_TRANSCRIPTS = 13,
  FD_ERR_SCHEMA = 14,
  FD_ERR_KEY_MISMATCH = 15,
  FD_ERR_LENGTH_MISMATCH = 16,
  FD_ERR_UNDEFINED_RATE = 17,
  FD_ERR_DEGENERATE_DATA = 18,
  FD_ERR_INVALID_CONFIG = 19,
  FD_ERR_IO = 20,
  FD_ERR_PRECONDITION = 21,
  FD_ERR_INTERNAL = 22
} fd_status;

const char* fd_version(void);
const char* fd_status_name(fd_status status);

/* Thread-local message for the last failed call on this thread. */
const char* fd_last_error(void);

void fd_string_free(char* text);

/* ---- runs ------------------------------------------------------------ */

typedef struct fd_run fd_run;

/* Parses and validates a run configuration from JSON text. */
fd_status fd_run_create(const char* config_json, fd_run** out_run);
void fd_run_destroy(fd_run* run);

/*
 * Each command writes its outputs (predictions, transcripts, verdicts,
 * metrics, config snapshot, run log) under <out_dir>/runs/<run_id>/ and
 * returns a JSON summary. A nonzero exit_code (when the pointer is given)
 * reports per-record failures that did not abort the batch.
 */
fd_status fd_run_evaluate(fd_run* run, char** summary_json, int* exit_code);
fd_status fd_run_ambiguity(fd_run* run, char** summary_json, int* exit_code);
fd_status fd_run_learn_guidelines(fd_run* run, char** summary_json,
                                  int* exit_code);
fd_status fd_run_report(fd_run* run, char** summary_json, int* exit_code);

/* Human-readable table from the last evaluate/ambiguity/report call. */
fd_status fd_run_table(fd_run* run, char** table_text);

/* Stored run-log entries, as a JSON document. */
fd_status fd_replay(const char* out_dir, const char* run_id,
                    char** entries_json);

/* ---- stateless utilities --------------------------------------------- */

/* Wire encoding: 1 = faithful/consistent, 0 = unfaithful/inconsistent. */
fd_status fd_wire_label_name(int wire, const char** name);

/* Confusion counts over wire-encoded vectors; positive = faithfulness
 * error (wire 0). */
fd_status fd_confusion(const int* pred_wire, const int* gold_wire, size_t n,
                       uint64_t* tp, uint64_t* fp, uint64_t* tn,
                       uint64_t* fn);

fd_status fd_balanced_accuracy(uint64_t tp, uint64_t fp, uint64_t tn,
                               uint64_t fn, double* out);

/* Two-rater nominal Krippendorff alpha over integer label sequences. */
fd_status fd_krippendorff_alpha(const int* rater_a, const int* rater_b,
                                size_t n, double* out);

/* Parses a model response into an argument JSON
 * {label, explanation, thinking?}. */
fd_status fd_parse_argument(const char* text, char** argument_json);

/* The builtin assets as JSON documents. */
fd_status fd_default_guidelines(char** guidelines_json);
fd_status fd_taxonomy(char** taxonomy_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FAITHDEBATE_FAITHDEBATE_H */
