#ifndef FAITHDEBATE_TAXONOMY_HPP
#define FAITHDEBATE_TAXONOMY_HPP

#include <optional>
#include <string>
#include <vector>

#include "faithdebate/domain.hpp"
#include "json.hpp"

namespace faithdebate {

struct TaxonomyType {
  int id = 0;  // 1..16
  CoarseAmbiguity coarse = CoarseAmbiguity::Other;
  FineAmbiguity fine = FineAmbiguity::OtherEvaluabilityIssue;
  std::string display_name;
  std::string definition;
  std::string example_ref;
};

// One numbered entry of the taxonomy block embedded in ambiguity prompts.
// Two of the canonical types (non_assertion, other_evaluability_issue) have
// no prompt entry, and the prompts' extra "Other ambiguity phenomenon" item
// maps onto other_meaning_phenomenon, whose definition covers it.
struct TaxonomyPromptItem {
  int item = 0;  // 1..15
  FineAmbiguity maps_to = FineAmbiguity::OtherMeaningPhenomenon;
  std::string text;
};

// The ambiguity taxonomy as data: 16 fine types under 4 coarse categories
// plus the 15 numbered prompt items. Ships as a versioned asset so prompts
// and documentation cannot drift apart.
class AmbiguityTaxonomy {
 public:
  static AmbiguityTaxonomy builtin();  // the embedded asset
  static AmbiguityTaxonomy from_json(const nlohmann::json& doc);
  static AmbiguityTaxonomy from_file(const std::string& path);

  const std::string& version() const { return version_; }
  const std::vector<TaxonomyType>& types() const { return types_; }
  const std::vector<TaxonomyPromptItem>& prompt_items() const {
    return prompt_items_;
  }

  const TaxonomyType& type(FineAmbiguity fine) const;

  // "1. Deduction: ...\n2. ..." — the block substituted for {{taxonomy}}.
  std::string prompt_block() const;

  // Finds a taxonomy type cited by name in a model response
  // (case-insensitive; the longest matching name wins).
  std::optional<FineAmbiguity> match_cited_type(const std::string& text) const;

  nlohmann::ordered_json to_json() const;

 private:
  void validate() const;

  std::string version_;
  std::vector<TaxonomyType> types_;
  std::vector<TaxonomyPromptItem> prompt_items_;
};

}  // namespace faithdebate

#endif  // FAITHDEBATE_TAXONOMY_HPP
