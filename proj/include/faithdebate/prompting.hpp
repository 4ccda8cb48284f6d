#ifndef FAITHDEBATE_PROMPTING_HPP
#define FAITHDEBATE_PROMPTING_HPP

#include <optional>
#include <string>
#include <vector>

#include "faithdebate/domain.hpp"
#include "faithdebate/guidelines.hpp"
#include "faithdebate/taxonomy.hpp"

namespace faithdebate {

enum class PromptKind {
  EvaluatorRound1,
  EvaluatorLater,
  Adjudicator,
  ZeroShot,
  ChainOfThought,
  AmbiguityZeroShot,
  AmbiguityWithArguments,
};

const char* prompt_kind_name(PromptKind kind);

// One line of the serialized chat history. Display names are pseudonymous
// ("Agent 1", ...) and assigned after shuffling; the reading agent's own
// entries are labeled "You".
struct HistoryEntry {
  std::string display_name;
  Argument argument;
};

struct ChatHistoryView {
  std::vector<HistoryEntry> entries;
  bool includes_initial_stances = false;

  // Stance entries appear exactly in round-1 views; later views must not
  // contain imposed arguments.
  void validate() const;
};

struct RenderOptions {
  bool intervention = false;
  bool request_used_guidelines = false;
};

// "The summary is faithful" / "The summary is unfaithful".
std::string stance_sentence(FaithfulnessLabel label);

std::string serialize_chat_history(const ChatHistoryView& view);

// Fills the template for `kind`. history is required for
// EvaluatorRound1/EvaluatorLater/Adjudicator/AmbiguityWithArguments and
// taxonomy for both ambiguity kinds; a missing requirement raises
// MissingContext. Rendering is pure: identical inputs give identical bytes.
std::string render_prompt(PromptKind kind, const EvaluationRecord& record,
                          const GuidelineSet& guidelines,
                          const ChatHistoryView* history,
                          const AmbiguityTaxonomy* taxonomy,
                          const RenderOptions& options = {});

std::string render_negation_prompt(const std::string& guideline);

// First <tag>...</tag> content anywhere in the text, trimmed; empty when the
// tag is absent.
std::string extract_tag(const std::string& text, const std::string& tag);
bool has_tag(const std::string& text, const std::string& tag);

// Parses a model response into an Argument. The first label tag anywhere in
// the response decides the verdict; missing or non-binary labels raise
// ParseFailure. The explanation defaults to empty and thinking stays unset
// when absent.
Argument parse_argument(const std::string& text, int agent_id, int round);

struct AmbiguityParse {
  bool is_ambiguous = false;
  std::optional<FineAmbiguity> cited_type;
  std::string explanation;
};

// Label 1 = ambiguous per the ambiguity templates' convention. The cited
// taxonomy type is matched by name against the explanation first, then the
// full response.
AmbiguityParse parse_ambiguity_verdict(const std::string& text,
                                       const AmbiguityTaxonomy& taxonomy);

// Canonical model-output form of an argument:
// <thinking>..</thinking><label>W</label><explanation>..</explanation>.
// parse_argument inverts it on the label and explanation channels. Used by
// scripted fixtures.
std::string to_model_text(const Argument& argument);

// Lines of the <used_guidelines> block, trimmed, list markers stripped.
std::vector<std::string> parse_used_guidelines(const std::string& text);

}  // namespace faithdebate

#endif  // FAITHDEBATE_PROMPTING_HPP
