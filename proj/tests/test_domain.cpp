#include "faithdebate/domain.hpp"

#include "doctest.h"
#include "faithdebate/errors.hpp"

using namespace faithdebate;

TEST_CASE("label wire encoding") {
  CHECK(label_to_wire(FaithfulnessLabel::Faithful) == 1);
  CHECK(label_to_wire(FaithfulnessLabel::Unfaithful) == 0);
  CHECK(wire_to_label(1) == FaithfulnessLabel::Faithful);
  CHECK(wire_to_label(0) == FaithfulnessLabel::Unfaithful);

  for (auto label : {FaithfulnessLabel::Faithful,
                     FaithfulnessLabel::Unfaithful}) {
    CHECK(wire_to_label(label_to_wire(label)) == label);
  }

  CHECK_THROWS_WITH_AS(wire_to_label(2), doctest::Contains("0 or 1"), Error);
  CHECK_THROWS_AS(wire_to_label(-1), Error);
  try {
    wire_to_label(2);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidWireLabel);
  }
}

TEST_CASE("record validation") {
  EvaluationRecord record;
  record.record_id = "r1";
  record.document = "doc";
  record.summary = "sum";
  record.granularity = Granularity::FullSummary;
  CHECK_NOTHROW(record.validate());

  SUBCASE("empty text rejected") {
    record.document.clear();
    CHECK_THROWS_AS(record.validate(), Error);
  }
  SUBCASE("sentence_index required exactly for sentence granularity") {
    record.granularity = Granularity::Sentence;
    CHECK_THROWS_AS(record.validate(), Error);
    record.sentence_index = 0;
    CHECK_NOTHROW(record.validate());
    record.granularity = Granularity::FullSummary;
    CHECK_THROWS_AS(record.validate(), Error);
  }
  SUBCASE("negative sentence index rejected") {
    record.granularity = Granularity::Sentence;
    record.sentence_index = -1;
    CHECK_THROWS_AS(record.validate(), Error);
  }
}

TEST_CASE("argument invariants") {
  Argument stance;
  stance.agent_id = 0;
  stance.round = 0;
  stance.imposed = true;
  CHECK_NOTHROW(stance.validate());

  SUBCASE("imposed arguments carry no explanation") {
    stance.explanation = "text";
    CHECK_THROWS_AS(stance.validate(), Error);
  }
  SUBCASE("imposed iff round zero") {
    stance.round = 1;
    CHECK_THROWS_AS(stance.validate(), Error);
    Argument arg;
    arg.round = 0;
    arg.imposed = false;
    CHECK_THROWS_AS(arg.validate(), Error);
  }
}

TEST_CASE("ambiguity annotation consistency") {
  AmbiguityAnnotation annotation;
  annotation.is_ambiguous = true;
  annotation.coarse = CoarseAmbiguity::Meaning;
  annotation.fine = FineAmbiguity::Vagueness;
  CHECK_NOTHROW(annotation.validate());

  SUBCASE("fine parent must match coarse") {
    annotation.coarse = CoarseAmbiguity::Context;
    CHECK_THROWS_AS(annotation.validate(), Error);
  }
  SUBCASE("categories forbidden on non-ambiguous annotations") {
    annotation.is_ambiguous = false;
    CHECK_THROWS_AS(annotation.validate(), Error);
  }
}

TEST_CASE("fine type parents cover the taxonomy shape") {
  int per_coarse[4] = {0, 0, 0, 0};
  for (int i = 0; i < kFineAmbiguityCount; ++i) {
    auto fine = static_cast<FineAmbiguity>(i);
    ++per_coarse[static_cast<int>(fine_ambiguity_parent(fine))];
    // Names round-trip.
    CHECK(fine_ambiguity_from_name(fine_ambiguity_name(fine)) == fine);
  }
  CHECK(per_coarse[static_cast<int>(CoarseAmbiguity::ImplicitReasoning)] == 4);
  CHECK(per_coarse[static_cast<int>(CoarseAmbiguity::Meaning)] == 8);
  CHECK(per_coarse[static_cast<int>(CoarseAmbiguity::Context)] == 3);
  CHECK(per_coarse[static_cast<int>(CoarseAmbiguity::Other)] == 1);
}

TEST_CASE("debate config validation") {
  DebateConfig config;
  CHECK_NOTHROW(config.validate());

  SUBCASE("split must sum to agents") {
    config.stance_split = {2, 3};
    CHECK_THROWS_AS(config.validate(), Error);
  }
  SUBCASE("adjudicator count must be odd") {
    config.num_adjudicators = 2;
    CHECK_THROWS_AS(config.validate(), Error);
  }
  SUBCASE("debate vote needs odd session count") {
    config.aggregation = Aggregation::DebateVote;
    config.num_sessions = 4;
    CHECK_THROWS_AS(config.validate(), Error);
    config.num_sessions = 3;
    CHECK_NOTHROW(config.validate());
  }
  SUBCASE("vote modes need several sessions") {
    config.aggregation = Aggregation::AgentVote;
    config.num_sessions = 1;
    CHECK_THROWS_AS(config.validate(), Error);
  }
  SUBCASE("intervention round bounds") {
    config.intervention_round = 1;
    CHECK_THROWS_AS(config.validate(), Error);
    config.intervention_round = 4;
    CHECK_THROWS_AS(config.validate(), Error);
    config.intervention_round = 3;
    CHECK_NOTHROW(config.validate());
  }
  SUBCASE("explicit odd split accepted") {
    config.num_agents = 5;
    config.stance_split = {2, 3};
    CHECK_NOTHROW(config.validate());
  }
}

TEST_CASE("uniform split rejects odd agent counts") {
  CHECK(uniform_stance_split(4) == std::pair<int, int>{2, 2});
  CHECK(uniform_stance_split(8) == std::pair<int, int>{4, 4});
  CHECK_THROWS_AS(uniform_stance_split(5), Error);
  CHECK_THROWS_AS(uniform_stance_split(3), Error);
  try {
    uniform_stance_split(5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSplit);
  }
}
