#include "faithdebate/baselines.hpp"

#include "faithdebate/errors.hpp"
#include "faithdebate/parallel.hpp"
#include "faithdebate/prompting.hpp"

namespace faithdebate {

namespace {

BaselineVerdict single_call(Gateway& gateway, const EvaluationRecord& record,
                            PromptKind kind, const std::string& tag,
                            const BaselineOptions& options) {
  record.validate();
  CompletionRequest request;
  request.user_text =
      render_prompt(kind, record, default_guidelines(), nullptr, nullptr);
  request.temperature = options.single_shot_temperature;
  request.max_tokens = options.max_tokens;
  request.request_tag = tag;

  std::string last_error;
  for (int attempt = 0; attempt <= options.parse_retries; ++attempt) {
    CompletionResponse response = gateway.complete(request);
    try {
      Argument parsed = parse_argument(response.text, 0, 1);
      BaselineVerdict verdict;
      verdict.label = parsed.label;
      verdict.explanation = parsed.explanation;
      verdict.thinking = parsed.thinking;
      return verdict;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseFailure) throw;
      last_error = e.what();
    }
  }
  raise(ErrorCode::ParseFailure,
        "no parseable verdict for record " + record.record_id +
            " after retries: " + last_error);
}

}  // namespace

BaselineVerdict zero_shot(Gateway& gateway, const EvaluationRecord& record,
                          const BaselineOptions& options) {
  return single_call(gateway, record, PromptKind::ZeroShot,
                     record.record_id + "/zs", options);
}

BaselineVerdict chain_of_thought(Gateway& gateway,
                                 const EvaluationRecord& record,
                                 const BaselineOptions& options) {
  return single_call(gateway, record, PromptKind::ChainOfThought,
                     record.record_id + "/cot", options);
}

SelfConsistencyOutcome self_consistency(Gateway& gateway,
                                        const EvaluationRecord& record,
                                        int n_samples,
                                        const BaselineOptions& options) {
  record.validate();
  if (n_samples < 1) {
    raise(ErrorCode::InvalidArgument, "self_consistency needs n_samples >= 1");
  }
  std::string prompt = render_prompt(PromptKind::ZeroShot, record,
                                     default_guidelines(), nullptr, nullptr);

  std::vector<std::optional<FaithfulnessLabel>> slots(
      static_cast<std::size_t>(n_samples));
  parallel_for(n_samples, options.parallel, [&](int sample) {
    CompletionRequest request;
    request.user_text = prompt;
    request.temperature = options.temperature;
    request.max_tokens = options.max_tokens;
    request.request_tag = record.record_id + "/sc" + std::to_string(sample);
    for (int attempt = 0; attempt <= options.parse_retries; ++attempt) {
      CompletionResponse response = gateway.complete(request);
      try {
        slots[static_cast<std::size_t>(sample)] =
            parse_argument(response.text, 0, 1).label;
        return;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ParseFailure) throw;
      }
    }
  });

  SelfConsistencyOutcome outcome;
  int count_faithful = 0;
  for (const auto& slot : slots) {
    if (!slot) continue;
    outcome.samples.push_back(*slot);
    if (*slot == FaithfulnessLabel::Faithful) ++count_faithful;
  }
  if (outcome.samples.empty()) {
    raise(ErrorCode::ParseFailure,
          "no self-consistency sample parsed for record " + record.record_id);
  }
  int valid = static_cast<int>(outcome.samples.size());
  int count_unfaithful = valid - count_faithful;
  outcome.ratio_faithful = static_cast<double>(count_faithful) / valid;
  if (count_faithful == count_unfaithful) {
    outcome.majority = FaithfulnessLabel::Unfaithful;
    outcome.tie_broken = true;
  } else {
    outcome.majority = count_faithful > count_unfaithful
                           ? FaithfulnessLabel::Faithful
                           : FaithfulnessLabel::Unfaithful;
  }
  return outcome;
}

}  // namespace faithdebate
