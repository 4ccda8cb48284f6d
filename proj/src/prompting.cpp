#include "faithdebate/prompting.hpp"

#include <cctype>

#include "faithdebate/assets.hpp"
#include "faithdebate/errors.hpp"

namespace faithdebate {

namespace {

constexpr const char* kInterventionText =
    "The evaluator agents have not reached an agreement so far. Be more open "
    "to the other agents' opinions: accept their arguments when they are "
    "sound according to the guidelines, even if that means changing your "
    "current assessment. ";

constexpr const char* kUsedGuidelinesRequest =
    " Also list the guidelines you used to make your judgment between "
    "<used_guidelines></used_guidelines> XML tags, one guideline per line.";

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return s.substr(begin, end - begin);
}

const char* template_asset(PromptKind kind) {
  switch (kind) {
    case PromptKind::EvaluatorRound1: return "prompts/evaluator_round1.txt";
    case PromptKind::EvaluatorLater: return "prompts/evaluator_later.txt";
    case PromptKind::Adjudicator: return "prompts/adjudicator.txt";
    case PromptKind::ZeroShot: return "prompts/zero_shot.txt";
    case PromptKind::ChainOfThought: return "prompts/chain_of_thought.txt";
    case PromptKind::AmbiguityZeroShot:
      return "prompts/ambiguity_zero_shot.txt";
    case PromptKind::AmbiguityWithArguments:
      return "prompts/ambiguity_with_arguments.txt";
  }
  raise(ErrorCode::Internal, "unknown prompt kind");
}

// Template body = asset content minus the leading '#' header comment lines
// and a single trailing newline.
std::string template_body(const std::string& asset_path) {
  std::string_view raw = embedded_asset(asset_path);
  std::size_t pos = 0;
  while (pos < raw.size() && raw[pos] == '#') {
    std::size_t eol = raw.find('\n', pos);
    if (eol == std::string_view::npos) {
      pos = raw.size();
      break;
    }
    pos = eol + 1;
  }
  std::string body(raw.substr(pos));
  if (!body.empty() && body.back() == '\n') body.pop_back();
  return body;
}

void substitute(std::string& text, const std::string& name,
                const std::string& value) {
  std::string placeholder = "{{" + name + "}}";
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
}

bool needs_history(PromptKind kind) {
  return kind == PromptKind::EvaluatorRound1 ||
         kind == PromptKind::EvaluatorLater ||
         kind == PromptKind::Adjudicator ||
         kind == PromptKind::AmbiguityWithArguments;
}

bool needs_taxonomy(PromptKind kind) {
  return kind == PromptKind::AmbiguityZeroShot ||
         kind == PromptKind::AmbiguityWithArguments;
}

}  // namespace

const char* prompt_kind_name(PromptKind kind) {
  switch (kind) {
    case PromptKind::EvaluatorRound1: return "evaluator_round1";
    case PromptKind::EvaluatorLater: return "evaluator_later";
    case PromptKind::Adjudicator: return "adjudicator";
    case PromptKind::ZeroShot: return "zero_shot";
    case PromptKind::ChainOfThought: return "chain_of_thought";
    case PromptKind::AmbiguityZeroShot: return "ambiguity_zero_shot";
    case PromptKind::AmbiguityWithArguments:
      return "ambiguity_with_arguments";
  }
  return "unknown";
}

void ChatHistoryView::validate() const {
  for (const auto& entry : entries) {
    entry.argument.validate();
    if (includes_initial_stances) {
      if (!entry.argument.imposed) {
        raise(ErrorCode::InvalidArgument,
              "a round-1 history view holds only imposed stances");
      }
    } else if (entry.argument.imposed) {
      raise(ErrorCode::InvalidArgument,
            "imposed stances may not appear in a later-round history view");
    }
  }
}

std::string stance_sentence(FaithfulnessLabel label) {
  return label == FaithfulnessLabel::Faithful ? "The summary is faithful"
                                              : "The summary is unfaithful";
}

std::string serialize_chat_history(const ChatHistoryView& view) {
  std::string out;
  int current_round = -1;
  for (const auto& entry : view.entries) {
    if (entry.argument.round != current_round) {
      current_round = entry.argument.round;
      if (!out.empty()) out += '\n';
      out += current_round == 0 ? "Initial beliefs:"
                                : "Round " + std::to_string(current_round) +
                                      ":";
      out += '\n';
    }
    if (entry.argument.imposed) {
      out += entry.display_name + ": " +
             stance_sentence(entry.argument.label) + '\n';
    } else {
      out += entry.display_name + " (label: " +
             label_name(entry.argument.label) +
             "): " + entry.argument.explanation + '\n';
    }
  }
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::string render_prompt(PromptKind kind, const EvaluationRecord& record,
                          const GuidelineSet& guidelines,
                          const ChatHistoryView* history,
                          const AmbiguityTaxonomy* taxonomy,
                          const RenderOptions& options) {
  record.validate();
  if (needs_history(kind) && !history) {
    raise(ErrorCode::MissingContext,
          std::string(prompt_kind_name(kind)) + " prompt needs a history");
  }
  if (needs_taxonomy(kind) && !taxonomy) {
    raise(ErrorCode::MissingContext,
          std::string(prompt_kind_name(kind)) + " prompt needs the taxonomy");
  }
  if (history) {
    history->validate();
    if (kind == PromptKind::EvaluatorRound1 &&
        !history->includes_initial_stances) {
      raise(ErrorCode::MissingContext,
            "round-1 rendering expects the imposed stances as history");
    }
    if ((kind == PromptKind::EvaluatorLater ||
         kind == PromptKind::Adjudicator) &&
        history->includes_initial_stances) {
      raise(ErrorCode::MissingContext,
            "later-round rendering must not see the imposed stances");
    }
  }

  std::string text = template_body(template_asset(kind));
  substitute(text, "document", record.document);
  substitute(text, "summary", record.summary);
  substitute(text, "guidelines", guidelines.prompt_block());
  if (history) {
    std::string serialized = serialize_chat_history(*history);
    substitute(text, "chat_history", serialized);
    substitute(text, "arguments", serialized);
  }
  if (taxonomy) {
    substitute(text, "taxonomy", taxonomy->prompt_block());
  }
  substitute(text, "intervention", options.intervention ? kInterventionText
                                                        : "");
  substitute(text, "used_guidelines_request",
             options.request_used_guidelines ? kUsedGuidelinesRequest : "");
  return text;
}

std::string render_negation_prompt(const std::string& guideline) {
  if (guideline.empty()) {
    raise(ErrorCode::PreconditionViolation,
          "cannot render a negation prompt for an empty guideline");
  }
  std::string text = template_body("prompts/negate_guideline.txt");
  substitute(text, "guideline", guideline);
  return text;
}

std::string extract_tag(const std::string& text, const std::string& tag) {
  std::string open = "<" + tag + ">";
  std::string close = "</" + tag + ">";
  std::size_t begin = text.find(open);
  if (begin == std::string::npos) return "";
  begin += open.size();
  std::size_t end = text.find(close, begin);
  if (end == std::string::npos) return "";
  return trim(text.substr(begin, end - begin));
}

bool has_tag(const std::string& text, const std::string& tag) {
  std::string open = "<" + tag + ">";
  std::size_t begin = text.find(open);
  if (begin == std::string::npos) return false;
  return text.find("</" + tag + ">", begin + open.size()) !=
         std::string::npos;
}

Argument parse_argument(const std::string& text, int agent_id, int round) {
  std::string label_text = extract_tag(text, "label");
  if (!has_tag(text, "label")) {
    raise(ErrorCode::ParseFailure, "response carries no <label> tag");
  }
  if (label_text != "0" && label_text != "1") {
    raise(ErrorCode::ParseFailure,
          "label tag content is not a binary verdict: '" + label_text + "'");
  }
  Argument argument;
  argument.agent_id = agent_id;
  argument.round = round;
  argument.label = wire_to_label(label_text == "1" ? 1 : 0);
  argument.explanation = extract_tag(text, "explanation");
  if (has_tag(text, "thinking")) {
    argument.thinking = extract_tag(text, "thinking");
  }
  argument.imposed = false;
  return argument;
}

AmbiguityParse parse_ambiguity_verdict(const std::string& text,
                                       const AmbiguityTaxonomy& taxonomy) {
  std::string label_text = extract_tag(text, "label");
  if (!has_tag(text, "label")) {
    raise(ErrorCode::ParseFailure,
          "ambiguity response carries no <label> tag");
  }
  if (label_text != "0" && label_text != "1") {
    raise(ErrorCode::ParseFailure,
          "ambiguity label is not a binary verdict: '" + label_text + "'");
  }
  AmbiguityParse parsed;
  parsed.is_ambiguous = label_text == "1";
  parsed.explanation = extract_tag(text, "explanation");
  if (parsed.is_ambiguous) {
    parsed.cited_type = taxonomy.match_cited_type(parsed.explanation);
    if (!parsed.cited_type) {
      parsed.cited_type = taxonomy.match_cited_type(text);
    }
  }
  return parsed;
}

std::string to_model_text(const Argument& argument) {
  std::string out;
  if (argument.thinking) {
    out += "<thinking>" + *argument.thinking + "</thinking>";
  }
  out += "<label>" + std::to_string(label_to_wire(argument.label)) +
         "</label>";
  out += "<explanation>" + argument.explanation + "</explanation>";
  return out;
}

std::vector<std::string> parse_used_guidelines(const std::string& text) {
  std::vector<std::string> out;
  std::string block = extract_tag(text, "used_guidelines");
  std::size_t pos = 0;
  while (pos <= block.size()) {
    std::size_t eol = block.find('\n', pos);
    std::string line = trim(eol == std::string::npos
                                ? block.substr(pos)
                                : block.substr(pos, eol - pos));
    // Strip "1.", "-", "*" list markers.
    std::size_t start = 0;
    while (start < line.size() &&
           std::isdigit(static_cast<unsigned char>(line[start]))) {
      ++start;
    }
    if (start < line.size() && start > 0 && line[start] == '.') ++start;
    if (start == 0 && !line.empty() && (line[0] == '-' || line[0] == '*')) {
      start = 1;
    }
    line = trim(line.substr(start));
    if (!line.empty()) out.push_back(std::move(line));
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return out;
}

}  // namespace faithdebate
