#include "faithdebate/assets.hpp"

#include <map>

#include "faithdebate/errors.hpp"

namespace faithdebate {

// Generated at configure time from the files under assets/.
extern const std::map<std::string, std::string_view>& embedded_asset_table();

std::string_view embedded_asset(const std::string& relative_path) {
  const auto& table = embedded_asset_table();
  auto it = table.find(relative_path);
  if (it == table.end()) {
    raise(ErrorCode::IoError, "no embedded asset named " + relative_path);
  }
  return it->second;
}

bool has_embedded_asset(const std::string& relative_path) {
  return embedded_asset_table().count(relative_path) > 0;
}

}  // namespace faithdebate
