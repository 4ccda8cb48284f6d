#include "support/fixtures.hpp"

#include <filesystem>
#include <fstream>

#include "faithdebate/errors.hpp"

namespace faithdebate::testing {

namespace fs = std::filesystem;

namespace {

std::string csv_escape(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  out << content;
  if (!out) {
    raise(ErrorCode::IoError, "fixture write failed: " + path.string());
  }
}

std::string document_text(const std::string& dataset, int doc) {
  // Commas and quotes on purpose: every row exercises quoted CSV fields.
  return "In the " + dataset + " meeting " + std::to_string(doc) +
         ", the council discussed budgets, schedules and the \"open floor\" "
         "items.\nMember A proposed an amendment, and member B seconded it.";
}

std::string sentence_text(int doc, int sent, bool faithful) {
  std::string base = "Sentence " + std::to_string(sent) + " of summary " +
                     std::to_string(doc);
  base += faithful ? " restates the amendment discussion."
                   : " claims a vote total that never appears.";
  return base;
}

// Sentence counts per doc chosen so the totals hit the published numbers:
// 772 = 240*3 + 26*2 over 266 docs, 726 = 194*3 + 72*2.
int sentences_for_doc(int doc, int three_sentence_docs) {
  return doc <= three_sentence_docs ? 3 : 2;
}

std::string tofueval_csv(const std::string& dataset, int docs,
                         int three_sentence_docs, int unfaithful_summaries) {
  std::string out =
      "doc_id,sent_idx,document,sentence,sentence_label,summary,"
      "summary_label\n";
  std::string prefix = dataset == "meetingbank" ? "mb" : "ms";
  for (int doc = 1; doc <= docs; ++doc) {
    char doc_id[16];
    std::snprintf(doc_id, sizeof(doc_id), "%s%04d", prefix.c_str(), doc);
    bool summary_unfaithful = doc <= unfaithful_summaries;
    int sentences = sentences_for_doc(doc, three_sentence_docs);
    std::string document = document_text(dataset, doc);
    std::string summary;
    for (int sent = 0; sent < sentences; ++sent) {
      bool faithful = !(summary_unfaithful && sent == 0);
      if (!summary.empty()) summary += ' ';
      summary += sentence_text(doc, sent, faithful);
    }
    for (int sent = 0; sent < sentences; ++sent) {
      bool faithful = !(summary_unfaithful && sent == 0);
      out += std::string(doc_id) + ',' + std::to_string(sent) + ',' +
             csv_escape(document) + ',' +
             csv_escape(sentence_text(doc, sent, faithful)) + ',' +
             (faithful ? "1" : "0") + ',' + csv_escape(summary) + ',' +
             (summary_unfaithful ? "0" : "1") + '\n';
    }
  }
  return out;
}

std::string aggrefact_csv(const std::string& dataset, int rows,
                          int unfaithful) {
  std::string out = "id,document,summary,label\n";
  for (int row = 1; row <= rows; ++row) {
    char id[16];
    std::snprintf(id, sizeof(id), "%s%04d", dataset.c_str(), row);
    bool is_unfaithful = row <= unfaithful;
    std::string document =
        "Article " + std::to_string(row) + " reports, in detail, on the " +
        dataset + " story about local infrastructure and \"funding gaps\".";
    std::string summary =
        is_unfaithful
            ? "The article, allegedly, confirms a figure it never mentions."
            : "The article covers local infrastructure funding.";
    out += std::string(id) + ',' + csv_escape(document) + ',' +
           csv_escape(summary) + ',' + (is_unfaithful ? "0" : "1") + '\n';
  }
  return out;
}

// 770 of the 772 MeetingBank sentences annotated; the first 131 ambiguous
// with the coarse distribution 38/38/45/10.
std::string ambiguity_jsonl() {
  static const char* fine_by_coarse[4][4] = {
      {"deduction", "common_sense_inference", "value_based_inference",
       "other_implicit_reasoning"},
      {"structural_ambiguity", "lexical_ambiguity", "vagueness",
       "synonymy_paraphrasing"},
      {"decontextualization", "conflation", "other_context_phenomenon",
       nullptr},
      {"other_evaluability_issue", nullptr, nullptr, nullptr}};
  static const int coarse_counts[4] = {38, 38, 45, 10};
  static const char* coarse_names[4] = {"implicit_reasoning", "meaning",
                                        "context", "other"};

  std::string out;
  int annotated = 0;
  int ambiguous_emitted = 0;
  int coarse_index = 0;
  int in_coarse = 0;
  for (int doc = 1; doc <= 266 && annotated < 770; ++doc) {
    int sentences = sentences_for_doc(doc, 240);
    for (int sent = 0; sent < sentences && annotated < 770; ++sent) {
      char record_id[48];
      std::snprintf(record_id, sizeof(record_id),
                    "meetingbank:mb%04d:s%d", doc, sent);
      nlohmann::ordered_json j;
      j["record_id"] = record_id;
      if (ambiguous_emitted < 131) {
        while (in_coarse >= coarse_counts[coarse_index]) {
          ++coarse_index;
          in_coarse = 0;
        }
        int fine_slots = 0;
        while (fine_slots < 4 && fine_by_coarse[coarse_index][fine_slots]) {
          ++fine_slots;
        }
        j["is_ambiguous"] = true;
        j["coarse"] = coarse_names[coarse_index];
        j["fine"] = fine_by_coarse[coarse_index][in_coarse % fine_slots];
        j["note"] = "fixture annotation";
        ++in_coarse;
        ++ambiguous_emitted;
      } else {
        j["is_ambiguous"] = false;
      }
      out += j.dump();
      out += '\n';
      ++annotated;
    }
  }
  return out;
}

}  // namespace

BenchmarkFixture write_benchmark_fixtures(const std::string& dir) {
  fs::create_directories(dir);
  BenchmarkFixture fixture;
  fixture.meetingbank_csv = (fs::path(dir) / "meetingbank.csv").string();
  fixture.mediasum_csv = (fs::path(dir) / "mediasum.csv").string();
  fixture.cnn_csv = (fs::path(dir) / "cnn.csv").string();
  fixture.xsum_csv = (fs::path(dir) / "xsum.csv").string();
  fixture.ambiguity_jsonl = (fs::path(dir) / "ambiguity.jsonl").string();

  write_file(fixture.meetingbank_csv, tofueval_csv("meetingbank", 266, 240, 98));
  write_file(fixture.mediasum_csv, tofueval_csv("mediasum", 266, 194, 117));
  write_file(fixture.cnn_csv, aggrefact_csv("cnn", 558, 56));
  write_file(fixture.xsum_csv, aggrefact_csv("xsum", 558, 273));
  write_file(fixture.ambiguity_jsonl, ambiguity_jsonl());
  return fixture;
}

std::string fresh_dir(const std::string& name) {
  fs::path dir = fs::path("fd_test_tmp") / name;
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);
  return dir.string();
}

EvaluationRecord make_record(const std::string& id, int gold_wire) {
  EvaluationRecord record;
  record.record_id = id;
  record.dataset = "fixture";
  record.document =
      "The committee met on Tuesday. It approved the annual budget and "
      "postponed the road repair vote to the next session.";
  record.summary = "The committee approved the budget.";
  record.granularity = Granularity::FullSummary;
  if (gold_wire >= 0) record.gold_label = wire_to_label(gold_wire);
  return record;
}

std::string agent_response(int wire, const std::string& explanation,
                           const std::string& thinking) {
  std::string out;
  if (!thinking.empty()) out += "<thinking>" + thinking + "</thinking>";
  out += "<label>" + std::to_string(wire) + "</label>";
  out += "<explanation>" + explanation + "</explanation>";
  return out;
}

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

}  // namespace faithdebate::testing
