#ifndef FAITHDEBATE_GUIDELINES_HPP
#define FAITHDEBATE_GUIDELINES_HPP

#include <optional>
#include <string>
#include <vector>

#include "faithdebate/domain.hpp"
#include "json.hpp"

namespace faithdebate {

class Gateway;
class RunLog;

enum class GuidelineProvenance { Curated, LearnedPositive, LearnedNegated };

const char* guideline_provenance_name(GuidelineProvenance p);
GuidelineProvenance guideline_provenance_from_name(const std::string& name);

struct GuidelineEntry {
  std::string text;
  GuidelineProvenance provenance = GuidelineProvenance::Curated;
  std::optional<std::string> source_run;
  // Negated restatements come from a model and must be reviewed by a human
  // before the set is trusted for real evaluations.
  bool needs_review = false;
};

// Ordered, deduplicated set of evaluation guidelines. Equality of entries is
// decided on a normalized form (case-folded, whitespace-collapsed), so
// re-adding a known guideline is a no-op.
class GuidelineSet {
 public:
  GuidelineSet() = default;
  explicit GuidelineSet(std::string version) : version_(std::move(version)) {}

  // Returns true when the entry was new.
  bool add(GuidelineEntry entry);
  bool contains(const std::string& text) const;

  const std::vector<GuidelineEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const std::string& version() const { return version_; }
  void set_version(std::string version) { version_ = std::move(version); }

  // Numbered one-per-line rendering substituted for {{guidelines}}.
  std::string prompt_block() const;

  nlohmann::ordered_json to_json() const;
  static GuidelineSet from_json(const nlohmann::json& doc);
  static GuidelineSet from_file(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::string version_ = "unversioned";
  std::vector<GuidelineEntry> entries_;
  std::vector<std::string> normalized_;
};

std::string normalize_guideline(const std::string& text);

// The 13 curated defaults shipped as an asset; constant across calls.
const GuidelineSet& default_guidelines();

// Produces a negated restatement of one guideline via the gateway. The
// returned entry carries needs_review=true.
GuidelineEntry negate_guideline(Gateway& gateway, const std::string& text,
                                const std::string& request_tag = "negate");

struct LearnOptions {
  // Learning stops once this many consecutive dev records add nothing new.
  int stagnation_window = 10;
  bool parallel = false;
  RunLog* run_log = nullptr;
};

// Incremental guideline learning over a labeled dev set: each record is
// debated with prompts that also request the guidelines used; agents whose
// final label matches gold contribute their reported guidelines, agents that
// are wrong contribute negated forms. The growing pool feeds every
// subsequent record's prompts.
GuidelineSet learn_guidelines(const std::vector<EvaluationRecord>& dev_records,
                              const DebateConfig& config, GuidelineSet initial,
                              Gateway& gateway, const LearnOptions& options);

}  // namespace faithdebate

#endif  // FAITHDEBATE_GUIDELINES_HPP
