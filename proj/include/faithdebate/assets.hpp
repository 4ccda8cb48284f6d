#ifndef FAITHDEBATE_ASSETS_HPP
#define FAITHDEBATE_ASSETS_HPP

#include <string>
#include <string_view>

namespace faithdebate {

// Assets under assets/ are embedded into the library at build time and
// addressed by their path relative to that directory, e.g.
// "prompts/zero_shot.txt" or "taxonomy.json". Throws IoError for unknown
// paths.
std::string_view embedded_asset(const std::string& relative_path);

bool has_embedded_asset(const std::string& relative_path);

}  // namespace faithdebate

#endif  // FAITHDEBATE_ASSETS_HPP
