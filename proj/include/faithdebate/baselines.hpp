#ifndef FAITHDEBATE_BASELINES_HPP
#define FAITHDEBATE_BASELINES_HPP

#include <optional>
#include <string>
#include <vector>

#include "faithdebate/domain.hpp"
#include "faithdebate/gateway.hpp"

namespace faithdebate {

struct BaselineOptions {
  double temperature = 1.0;         // sampled calls (self-consistency)
  double single_shot_temperature = 0.0;
  int max_tokens = 1024;
  int parse_retries = 2;
  bool parallel = false;
};

struct BaselineVerdict {
  FaithfulnessLabel label = FaithfulnessLabel::Faithful;
  std::string explanation;
  std::optional<std::string> thinking;
};

struct SelfConsistencyOutcome {
  std::vector<FaithfulnessLabel> samples;  // valid samples only
  FaithfulnessLabel majority = FaithfulnessLabel::Faithful;
  double ratio_faithful = 0.0;  // faithful count / valid samples
  bool tie_broken = false;
};

// One direct verdict from the zero-shot prompt.
BaselineVerdict zero_shot(Gateway& gateway, const EvaluationRecord& record,
                          const BaselineOptions& options = {});

// As zero_shot, with the reasoning captured from the thinking tag when the
// model emits one.
BaselineVerdict chain_of_thought(Gateway& gateway,
                                 const EvaluationRecord& record,
                                 const BaselineOptions& options = {});

// n independent sampled verdicts, majority label; an even split falls to
// Unfaithful with tie_broken set. Fails only when no sample parses.
SelfConsistencyOutcome self_consistency(Gateway& gateway,
                                        const EvaluationRecord& record,
                                        int n_samples,
                                        const BaselineOptions& options = {});

}  // namespace faithdebate

#endif  // FAITHDEBATE_BASELINES_HPP
