#ifndef FAITHDEBATE_TESTS_FIXTURES_HPP
#define FAITHDEBATE_TESTS_FIXTURES_HPP

#include <string>

#include "faithdebate/domain.hpp"
#include "json.hpp"

namespace faithdebate::testing {

// Paths of deterministic benchmark fixture files written in the pinned
// upstream schemas, with the published record counts and class balances:
// MeetingBank 266 summaries / 772 sentences (37% unfaithful), MediaSum
// 266 / 726 (44%), CNN 558 (10%), XSum 558 (49%), and a MeetingBank
// ambiguity file with 770 annotated / 131 ambiguous sentences.
struct BenchmarkFixture {
  std::string meetingbank_csv;
  std::string mediasum_csv;
  std::string cnn_csv;
  std::string xsum_csv;
  std::string ambiguity_jsonl;
};

BenchmarkFixture write_benchmark_fixtures(const std::string& dir);

// Wipes and recreates a per-test scratch directory under the working dir.
std::string fresh_dir(const std::string& name);

EvaluationRecord make_record(const std::string& id,
                             int gold_wire = -1 /* -1 = no gold */);

// Canned model response in the canonical tag format.
std::string agent_response(int wire, const std::string& explanation = "ok",
                           const std::string& thinking = "");

std::string agent_tag(const std::string& record_id, int session, int round,
                      int agent);
std::string adjudicator_tag(const std::string& record_id, int session,
                            int adjudicator);

}  // namespace faithdebate::testing

#endif  // FAITHDEBATE_TESTS_FIXTURES_HPP
