#include "faithdebate/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "faithdebate/assets.hpp"
#include "faithdebate/errors.hpp"

namespace faithdebate {

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// The name part of a prompt item, e.g. "Structural ambiguity" from
// "Structural ambiguity: A phrase or sentence ...".
std::string item_label(const std::string& text) {
  auto pos = text.find(':');
  return pos == std::string::npos ? text : text.substr(0, pos);
}

}  // namespace

AmbiguityTaxonomy AmbiguityTaxonomy::builtin() {
  static const AmbiguityTaxonomy instance = from_json(
      nlohmann::json::parse(embedded_asset("taxonomy.json")));
  return instance;
}

AmbiguityTaxonomy AmbiguityTaxonomy::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    raise(ErrorCode::IoError, "cannot open taxonomy file: " + path);
  }
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    raise(ErrorCode::SchemaError, "taxonomy file is not valid JSON: " + path);
  }
  return from_json(doc);
}

AmbiguityTaxonomy AmbiguityTaxonomy::from_json(const nlohmann::json& doc) {
  AmbiguityTaxonomy taxonomy;
  if (!doc.is_object() || !doc.contains("types") || !doc["types"].is_array()) {
    raise(ErrorCode::SchemaError, "taxonomy must carry a 'types' array");
  }
  taxonomy.version_ = doc.value("version", "unversioned");
  for (const auto& t : doc["types"]) {
    TaxonomyType type;
    type.id = t.at("id").get<int>();
    type.coarse = coarse_ambiguity_from_name(t.at("coarse").get<std::string>());
    type.fine = fine_ambiguity_from_name(t.at("name").get<std::string>());
    type.display_name = t.at("display_name").get<std::string>();
    type.definition = t.at("definition").get<std::string>();
    type.example_ref = t.value("example_ref", "");
    taxonomy.types_.push_back(std::move(type));
  }
  if (doc.contains("prompt_items")) {
    for (const auto& p : doc["prompt_items"]) {
      TaxonomyPromptItem item;
      item.item = p.at("item").get<int>();
      item.maps_to =
          fine_ambiguity_from_name(p.at("maps_to").get<std::string>());
      item.text = p.at("text").get<std::string>();
      taxonomy.prompt_items_.push_back(std::move(item));
    }
  }
  taxonomy.validate();
  return taxonomy;
}

void AmbiguityTaxonomy::validate() const {
  if (types_.size() != kFineAmbiguityCount) {
    raise(ErrorCode::SchemaError,
          "taxonomy must define exactly 16 fine types, got " +
              std::to_string(types_.size()));
  }
  for (std::size_t i = 0; i < types_.size(); ++i) {
    const TaxonomyType& t = types_[i];
    if (t.id != static_cast<int>(i) + 1) {
      raise(ErrorCode::SchemaError, "taxonomy type ids must run 1..16");
    }
    if (t.coarse != fine_ambiguity_parent(t.fine)) {
      raise(ErrorCode::SchemaError,
            std::string("taxonomy type ") + fine_ambiguity_name(t.fine) +
                " is filed under the wrong coarse category");
    }
    if (t.definition.empty() || t.display_name.empty()) {
      raise(ErrorCode::SchemaError,
            "taxonomy type " + std::to_string(t.id) +
                " needs a display name and definition");
    }
  }
  for (std::size_t i = 0; i < prompt_items_.size(); ++i) {
    if (prompt_items_[i].item != static_cast<int>(i) + 1) {
      raise(ErrorCode::SchemaError, "taxonomy prompt items must run 1..n");
    }
    if (prompt_items_[i].text.empty()) {
      raise(ErrorCode::SchemaError, "taxonomy prompt item text missing");
    }
  }
}

const TaxonomyType& AmbiguityTaxonomy::type(FineAmbiguity fine) const {
  for (const auto& t : types_) {
    if (t.fine == fine) return t;
  }
  raise(ErrorCode::Internal, "taxonomy type lookup failed");
}

std::string AmbiguityTaxonomy::prompt_block() const {
  std::string block;
  for (const auto& item : prompt_items_) {
    if (!block.empty()) block += '\n';
    block += std::to_string(item.item) + ". " + item.text;
  }
  return block;
}

std::optional<FineAmbiguity> AmbiguityTaxonomy::match_cited_type(
    const std::string& text) const {
  std::string haystack = lowercase(text);
  std::optional<FineAmbiguity> best;
  std::size_t best_len = 0;

  auto consider = [&](const std::string& name, FineAmbiguity fine) {
    if (name.empty() || name.size() <= best_len) return;
    if (haystack.find(lowercase(name)) != std::string::npos) {
      best = fine;
      best_len = name.size();
    }
  };

  for (const auto& item : prompt_items_) {
    consider(item_label(item.text), item.maps_to);
  }
  for (const auto& t : types_) {
    consider(t.display_name, t.fine);
    // Also the bare tail of compound display names ("Vagueness",
    // "Conflation" are already bare; "Semantic relations: Synonymy/..." has
    // its usable part in the prompt label).
  }
  return best;
}

nlohmann::ordered_json AmbiguityTaxonomy::to_json() const {
  nlohmann::ordered_json doc;
  doc["version"] = version_;
  doc["types"] = nlohmann::ordered_json::array();
  for (const auto& t : types_) {
    nlohmann::ordered_json j;
    j["id"] = t.id;
    j["coarse"] = coarse_ambiguity_name(t.coarse);
    j["name"] = fine_ambiguity_name(t.fine);
    j["display_name"] = t.display_name;
    j["definition"] = t.definition;
    j["example_ref"] = t.example_ref;
    doc["types"].push_back(std::move(j));
  }
  doc["prompt_items"] = nlohmann::ordered_json::array();
  for (const auto& p : prompt_items_) {
    nlohmann::ordered_json j;
    j["item"] = p.item;
    j["maps_to"] = fine_ambiguity_name(p.maps_to);
    j["text"] = p.text;
    doc["prompt_items"].push_back(std::move(j));
  }
  return doc;
}

}  // namespace faithdebate
