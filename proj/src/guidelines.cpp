#include "faithdebate/guidelines.hpp"

#include <cctype>
#include <fstream>

#include "faithdebate/assets.hpp"
#include "faithdebate/errors.hpp"
#include "faithdebate/gateway.hpp"
#include "faithdebate/prompting.hpp"

namespace faithdebate {

const char* guideline_provenance_name(GuidelineProvenance p) {
  switch (p) {
    case GuidelineProvenance::Curated: return "curated";
    case GuidelineProvenance::LearnedPositive: return "learned_positive";
    case GuidelineProvenance::LearnedNegated: return "learned_negated";
  }
  return "unknown";
}

GuidelineProvenance guideline_provenance_from_name(const std::string& name) {
  if (name == "curated") return GuidelineProvenance::Curated;
  if (name == "learned_positive") return GuidelineProvenance::LearnedPositive;
  if (name == "learned_negated") return GuidelineProvenance::LearnedNegated;
  raise(ErrorCode::InvalidArgument, "unknown guideline provenance: " + name);
}

std::string normalize_guideline(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

bool GuidelineSet::add(GuidelineEntry entry) {
  std::string normalized = normalize_guideline(entry.text);
  if (normalized.empty()) {
    raise(ErrorCode::InvalidArgument, "guideline text must be non-empty");
  }
  for (const auto& existing : normalized_) {
    if (existing == normalized) return false;
  }
  normalized_.push_back(std::move(normalized));
  entries_.push_back(std::move(entry));
  return true;
}

bool GuidelineSet::contains(const std::string& text) const {
  std::string normalized = normalize_guideline(text);
  for (const auto& existing : normalized_) {
    if (existing == normalized) return true;
  }
  return false;
}

std::string GuidelineSet::prompt_block() const {
  std::string block;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!block.empty()) block += '\n';
    block += std::to_string(i + 1) + ". " + entries_[i].text;
  }
  return block;
}

nlohmann::ordered_json GuidelineSet::to_json() const {
  nlohmann::ordered_json doc;
  doc["version"] = version_;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& entry : entries_) {
    nlohmann::ordered_json j;
    j["text"] = entry.text;
    j["provenance"] = guideline_provenance_name(entry.provenance);
    if (entry.source_run) j["source_run"] = *entry.source_run;
    if (entry.needs_review) j["needs_review"] = true;
    doc["entries"].push_back(std::move(j));
  }
  return doc;
}

GuidelineSet GuidelineSet::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("entries") ||
      !doc["entries"].is_array()) {
    raise(ErrorCode::SchemaError,
          "guideline set must carry an 'entries' array");
  }
  GuidelineSet set(doc.value("version", "unversioned"));
  for (const auto& j : doc["entries"]) {
    GuidelineEntry entry;
    entry.text = j.at("text").get<std::string>();
    entry.provenance =
        guideline_provenance_from_name(j.value("provenance", "curated"));
    if (j.contains("source_run")) {
      entry.source_run = j["source_run"].get<std::string>();
    }
    entry.needs_review = j.value("needs_review", false);
    set.add(std::move(entry));
  }
  return set;
}

GuidelineSet GuidelineSet::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open guideline set: " + path);
  }
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    raise(ErrorCode::SchemaError, "guideline set is not valid JSON: " + path);
  }
  return from_json(doc);
}

void GuidelineSet::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    raise(ErrorCode::IoError, "cannot write guideline set: " + path);
  }
  out << to_json().dump(2) << '\n';
  if (!out) {
    raise(ErrorCode::IoError, "guideline set write failed: " + path);
  }
}

const GuidelineSet& default_guidelines() {
  static const GuidelineSet instance = GuidelineSet::from_json(
      nlohmann::json::parse(embedded_asset("guidelines_default.json")));
  return instance;
}

GuidelineEntry negate_guideline(Gateway& gateway, const std::string& text,
                                const std::string& request_tag) {
  if (text.empty()) {
    raise(ErrorCode::PreconditionViolation,
          "cannot negate an empty guideline");
  }
  CompletionRequest request;
  request.user_text = render_negation_prompt(text);
  request.temperature = 0.0;
  request.request_tag = request_tag;
  CompletionResponse response = gateway.complete(request);
  std::string negated = extract_tag(response.text, "negated");
  if (negated.empty()) {
    raise(ErrorCode::ParseFailure,
          "negation response carried no <negated> tag");
  }
  GuidelineEntry entry;
  entry.text = std::move(negated);
  entry.provenance = GuidelineProvenance::LearnedNegated;
  entry.needs_review = true;
  return entry;
}

}  // namespace faithdebate
