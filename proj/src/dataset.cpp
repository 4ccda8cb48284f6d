#include "faithdebate/dataset.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "faithdebate/errors.hpp"

namespace faithdebate {

const char* dataset_adapter_name(DatasetAdapter adapter) {
  switch (adapter) {
    case DatasetAdapter::TofuEvalMeetingBank: return "tofueval_meetingbank";
    case DatasetAdapter::TofuEvalMediaSum: return "tofueval_mediasum";
    case DatasetAdapter::AggreFactCNN: return "aggrefact_cnn";
    case DatasetAdapter::AggreFactXSum: return "aggrefact_xsum";
    case DatasetAdapter::Canonical: return "canonical";
  }
  return "unknown";
}

DatasetAdapter dataset_adapter_from_name(const std::string& name) {
  if (name == "tofueval_meetingbank") {
    return DatasetAdapter::TofuEvalMeetingBank;
  }
  if (name == "tofueval_mediasum") return DatasetAdapter::TofuEvalMediaSum;
  if (name == "aggrefact_cnn") return DatasetAdapter::AggreFactCNN;
  if (name == "aggrefact_xsum") return DatasetAdapter::AggreFactXSum;
  if (name == "canonical") return DatasetAdapter::Canonical;
  raise(ErrorCode::InvalidArgument, "unknown dataset adapter: " + name);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& content) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          quoted = true;
          field_started = true;
        } else {
          field += c;
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') break;
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open dataset file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

[[noreturn]] void schema_error(const std::string& path, std::size_t line,
                               const std::string& what) {
  raise(ErrorCode::SchemaError,
        path + ":" + std::to_string(line) + ": " + what);
}

int parse_wire(const std::string& text, const std::string& path,
               std::size_t line, const char* column) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  schema_error(path, line,
               std::string(column) + " must be 0 or 1, got '" + text + "'");
}

int parse_int(const std::string& text, const std::string& path,
              std::size_t line, const char* column) {
  try {
    std::size_t used = 0;
    int value = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    schema_error(path, line,
                 std::string(column) + " must be an integer, got '" + text +
                     "'");
  }
}

void expect_header(const std::vector<std::string>& header,
                   const std::vector<std::string>& expected,
                   const std::string& path) {
  if (header != expected) {
    std::string want;
    for (const auto& column : expected) {
      if (!want.empty()) want += ',';
      want += column;
    }
    std::string got;
    for (const auto& column : header) {
      if (!got.empty()) got += ',';
      got += column;
    }
    schema_error(path, 1,
                 "unexpected columns (pinned schema expects '" + want +
                     "', file has '" + got + "')");
  }
}

void check_unique(std::set<std::string>& seen, const std::string& record_id,
                  const std::string& path, std::size_t line) {
  if (!seen.insert(record_id).second) {
    schema_error(path, line, "duplicate record_id '" + record_id + "'");
  }
}

// Pinned TofuEval sentence-annotation schema:
//   doc_id,sent_idx,document,sentence,sentence_label,summary,summary_label
// One row per annotated summary sentence; summary columns repeat within a
// doc_id group. Labels use the wire encoding (1 = faithful).
std::vector<EvaluationRecord> ingest_tofueval(const std::string& path,
                                              const std::string& dataset) {
  auto rows = parse_csv(read_file(path));
  if (rows.empty()) schema_error(path, 1, "empty file");
  expect_header(rows[0],
                {"doc_id", "sent_idx", "document", "sentence",
                 "sentence_label", "summary", "summary_label"},
                path);

  std::vector<EvaluationRecord> records;
  std::set<std::string> seen;
  struct SummaryGroup {
    std::string document;
    std::string summary;
    int label = 1;
    std::size_t first_line = 0;
  };
  std::vector<std::string> group_order;
  std::map<std::string, SummaryGroup> groups;

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    std::size_t line = i + 1;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 7) {
      schema_error(path, line,
                   "expected 7 columns, got " + std::to_string(row.size()));
    }
    const std::string& doc_id = row[0];
    int sent_idx = parse_int(row[1], path, line, "sent_idx");
    if (sent_idx < 0) schema_error(path, line, "sent_idx must be >= 0");

    EvaluationRecord record;
    record.record_id =
        dataset + ":" + doc_id + ":s" + std::to_string(sent_idx);
    record.dataset = dataset;
    record.document = row[2];
    record.summary = row[3];
    record.granularity = Granularity::Sentence;
    record.sentence_index = sent_idx;
    record.gold_label =
        wire_to_label(parse_wire(row[4], path, line, "sentence_label"));
    check_unique(seen, record.record_id, path, line);
    try {
      record.validate();
    } catch (const Error& e) {
      schema_error(path, line, e.what());
    }
    records.push_back(std::move(record));

    int summary_label = parse_wire(row[6], path, line, "summary_label");
    auto it = groups.find(doc_id);
    if (it == groups.end()) {
      group_order.push_back(doc_id);
      groups[doc_id] = {row[2], row[5], summary_label, line};
    } else {
      if (it->second.document != row[2] || it->second.summary != row[5] ||
          it->second.label != summary_label) {
        schema_error(path, line,
                     "summary columns disagree within doc_id '" + doc_id +
                         "'");
      }
    }
  }

  for (const auto& doc_id : group_order) {
    const SummaryGroup& group = groups[doc_id];
    EvaluationRecord record;
    record.record_id = dataset + ":" + doc_id;
    record.dataset = dataset;
    record.document = group.document;
    record.summary = group.summary;
    record.granularity = Granularity::FullSummary;
    record.gold_label = wire_to_label(group.label);
    check_unique(seen, record.record_id, path, group.first_line);
    try {
      record.validate();
    } catch (const Error& e) {
      schema_error(path, group.first_line, e.what());
    }
    records.push_back(std::move(record));
  }
  return records;
}

// Pinned AggreFact schema: id,document,summary,label (wire encoding).
std::vector<EvaluationRecord> ingest_aggrefact(const std::string& path,
                                               const std::string& dataset) {
  auto rows = parse_csv(read_file(path));
  if (rows.empty()) schema_error(path, 1, "empty file");
  expect_header(rows[0], {"id", "document", "summary", "label"}, path);

  std::vector<EvaluationRecord> records;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    std::size_t line = i + 1;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 4) {
      schema_error(path, line,
                   "expected 4 columns, got " + std::to_string(row.size()));
    }
    EvaluationRecord record;
    record.record_id = dataset + ":" + row[0];
    record.dataset = dataset;
    record.document = row[1];
    record.summary = row[2];
    record.granularity = Granularity::FullSummary;
    record.gold_label =
        wire_to_label(parse_wire(row[3], path, line, "label"));
    check_unique(seen, record.record_id, path, line);
    try {
      record.validate();
    } catch (const Error& e) {
      schema_error(path, line, e.what());
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<EvaluationRecord> ingest_canonical(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open dataset file: " + path);
  }
  std::vector<EvaluationRecord> records;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded()) {
      schema_error(path, line_no, "invalid JSON");
    }
    try {
      EvaluationRecord record = record_from_json(doc);
      check_unique(seen, record.record_id, path, line_no);
      records.push_back(std::move(record));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SchemaError) throw;
      schema_error(path, line_no, e.what());
    } catch (const nlohmann::json::exception& e) {
      schema_error(path, line_no, e.what());
    }
  }
  return records;
}

}  // namespace

std::vector<EvaluationRecord> ingest(const std::string& path,
                                     DatasetAdapter adapter) {
  switch (adapter) {
    case DatasetAdapter::TofuEvalMeetingBank:
      return ingest_tofueval(path, "meetingbank");
    case DatasetAdapter::TofuEvalMediaSum:
      return ingest_tofueval(path, "mediasum");
    case DatasetAdapter::AggreFactCNN:
      return ingest_aggrefact(path, "cnn");
    case DatasetAdapter::AggreFactXSum:
      return ingest_aggrefact(path, "xsum");
    case DatasetAdapter::Canonical:
      return ingest_canonical(path);
  }
  raise(ErrorCode::Internal, "unknown adapter");
}

nlohmann::ordered_json record_to_json(const EvaluationRecord& record) {
  nlohmann::ordered_json j;
  j["record_id"] = record.record_id;
  j["dataset"] = record.dataset;
  j["document"] = record.document;
  j["summary"] = record.summary;
  j["granularity"] = granularity_name(record.granularity);
  if (record.sentence_index) j["sentence_index"] = *record.sentence_index;
  if (record.gold_label) j["gold_label"] = label_to_wire(*record.gold_label);
  if (record.gold_ambiguity) {
    nlohmann::ordered_json a;
    a["is_ambiguous"] = record.gold_ambiguity->is_ambiguous;
    if (record.gold_ambiguity->coarse) {
      a["coarse"] = coarse_ambiguity_name(*record.gold_ambiguity->coarse);
    }
    if (record.gold_ambiguity->fine) {
      a["fine"] = fine_ambiguity_name(*record.gold_ambiguity->fine);
    }
    if (record.gold_ambiguity->note) a["note"] = *record.gold_ambiguity->note;
    j["gold_ambiguity"] = std::move(a);
  }
  return j;
}

namespace {

AmbiguityAnnotation annotation_from_json(const nlohmann::json& doc) {
  AmbiguityAnnotation annotation;
  annotation.is_ambiguous = doc.at("is_ambiguous").get<bool>();
  if (doc.contains("coarse") && !doc["coarse"].is_null()) {
    annotation.coarse =
        coarse_ambiguity_from_name(doc["coarse"].get<std::string>());
  }
  if (doc.contains("fine") && !doc["fine"].is_null()) {
    annotation.fine = fine_ambiguity_from_name(doc["fine"].get<std::string>());
    if (!annotation.coarse) {
      annotation.coarse = fine_ambiguity_parent(*annotation.fine);
    }
  }
  if (doc.contains("note") && !doc["note"].is_null()) {
    annotation.note = doc["note"].get<std::string>();
  }
  annotation.validate();
  return annotation;
}

}  // namespace

EvaluationRecord record_from_json(const nlohmann::json& doc) {
  EvaluationRecord record;
  record.record_id = doc.at("record_id").get<std::string>();
  record.dataset = doc.value("dataset", "");
  record.document = doc.at("document").get<std::string>();
  record.summary = doc.at("summary").get<std::string>();
  record.granularity =
      granularity_from_name(doc.value("granularity", "summary"));
  if (doc.contains("sentence_index") && !doc["sentence_index"].is_null()) {
    record.sentence_index = doc["sentence_index"].get<int>();
  }
  if (doc.contains("gold_label") && !doc["gold_label"].is_null()) {
    record.gold_label = wire_to_label(doc["gold_label"].get<int>());
  }
  if (doc.contains("gold_ambiguity") && !doc["gold_ambiguity"].is_null()) {
    record.gold_ambiguity = annotation_from_json(doc["gold_ambiguity"]);
  }
  record.validate();
  return record;
}

std::string serialize_canonical(const std::vector<EvaluationRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    out += record_to_json(record).dump();
    out += '\n';
  }
  return out;
}

void write_canonical(const std::string& path,
                     const std::vector<EvaluationRecord>& records) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) {
    raise(ErrorCode::IoError, "cannot write dataset file: " + path);
  }
  out << serialize_canonical(records);
  if (!out) {
    raise(ErrorCode::IoError, "dataset write failed: " + path);
  }
}

void join_ambiguity(std::vector<EvaluationRecord>& records,
                    const std::string& annotation_path) {
  std::ifstream in(annotation_path);
  if (!in) {
    raise(ErrorCode::IoError,
          "cannot open annotation file: " + annotation_path);
  }
  std::map<std::string, EvaluationRecord*> index;
  for (auto& record : records) {
    index[record.record_id] = &record;
  }

  std::vector<std::string> orphans;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded()) {
      schema_error(annotation_path, line_no, "invalid JSON");
    }
    std::string record_id;
    try {
      record_id = doc.at("record_id").get<std::string>();
      auto it = index.find(record_id);
      if (it == index.end()) {
        orphans.push_back(record_id);
        continue;
      }
      it->second->gold_ambiguity = annotation_from_json(doc);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SchemaError) throw;
      schema_error(annotation_path, line_no, e.what());
    } catch (const nlohmann::json::exception& e) {
      schema_error(annotation_path, line_no, e.what());
    }
  }
  if (!orphans.empty()) {
    std::string listed;
    std::size_t shown = std::min<std::size_t>(orphans.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
      if (!listed.empty()) listed += ", ";
      listed += orphans[i];
    }
    if (orphans.size() > shown) {
      listed += ", ... (" + std::to_string(orphans.size()) + " total)";
    }
    raise(ErrorCode::KeyMismatch,
          "annotations reference unknown record ids: " + listed);
  }
}

std::vector<EvaluationRecord> filter_granularity(
    const std::vector<EvaluationRecord>& records, Granularity granularity) {
  std::vector<EvaluationRecord> out;
  for (const auto& record : records) {
    if (record.granularity == granularity) out.push_back(record);
  }
  return out;
}

double unfaithful_fraction(const std::vector<EvaluationRecord>& records) {
  std::size_t labeled = 0;
  std::size_t unfaithful = 0;
  for (const auto& record : records) {
    if (!record.gold_label) continue;
    ++labeled;
    if (*record.gold_label == FaithfulnessLabel::Unfaithful) ++unfaithful;
  }
  if (labeled == 0) {
    raise(ErrorCode::UndefinedRate, "no gold labels present");
  }
  return static_cast<double>(unfaithful) / static_cast<double>(labeled);
}

}  // namespace faithdebate
