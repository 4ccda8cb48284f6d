#ifndef FAITHDEBATE_DATASET_HPP
#define FAITHDEBATE_DATASET_HPP

#include <string>
#include <vector>

#include "faithdebate/domain.hpp"
#include "json.hpp"

namespace faithdebate {

// Upstream benchmark layouts vary per release; each adapter pins one
// expected schema (documented in docs/datasets.md) and fails with a
// SchemaError naming the offending line instead of guessing columns.
enum class DatasetAdapter {
  TofuEvalMeetingBank,
  TofuEvalMediaSum,
  AggreFactCNN,
  AggreFactXSum,
  Canonical,
};

const char* dataset_adapter_name(DatasetAdapter adapter);
DatasetAdapter dataset_adapter_from_name(const std::string& name);

// Reads one benchmark file into normalized records. The TofuEval adapters
// emit every annotated sentence plus one full-summary record per summary
// group; the AggreFact adapters emit full-summary records; Canonical reads
// this project's own JSONL schema.
std::vector<EvaluationRecord> ingest(const std::string& path,
                                     DatasetAdapter adapter);

// Canonical JSONL: one record per line with wire-encoded labels. ingest ->
// serialize -> ingest is the identity on canonical fields.
std::string serialize_canonical(const std::vector<EvaluationRecord>& records);
void write_canonical(const std::string& path,
                     const std::vector<EvaluationRecord>& records);

nlohmann::ordered_json record_to_json(const EvaluationRecord& record);
EvaluationRecord record_from_json(const nlohmann::json& doc);

// Joins sentence-level ambiguity annotations (JSONL keyed by record_id) onto
// the records. Annotations naming unknown record ids raise KeyMismatch
// listing every orphan.
void join_ambiguity(std::vector<EvaluationRecord>& records,
                    const std::string& annotation_path);

std::vector<EvaluationRecord> filter_granularity(
    const std::vector<EvaluationRecord>& records, Granularity granularity);

// Fraction of records with a gold Unfaithful label, over records that carry
// a gold label.
double unfaithful_fraction(const std::vector<EvaluationRecord>& records);

// Strict RFC-4180-style CSV reader (quoted fields, embedded commas,
// quotes and newlines). Returns rows of fields; used by the benchmark
// adapters.
std::vector<std::vector<std::string>> parse_csv(const std::string& content);

}  // namespace faithdebate

#endif  // FAITHDEBATE_DATASET_HPP
