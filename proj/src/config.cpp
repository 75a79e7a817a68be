#include "namevo/config.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "namevo/errors.hpp"
#include "namevo/text.hpp"

namespace namevo {

Config load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw InputError("config file is not a JSON object: " + path.string());
  }

  Config config;
  for (const auto& [key, value] : j.items()) {
    if (key == "cache_dir") {
      config.cache_dir = value.get<std::string>();
    } else if (key == "api_base") {
      config.api_base = value.get<std::string>();
    } else if (key == "user_agent") {
      config.user_agent = value.get<std::string>();
    } else if (key == "rate_limit") {
      config.rate_limit = value.get<double>();
    } else if (key == "workers") {
      config.workers = value.get<int>();
    } else if (key == "offline") {
      config.offline = value.get<bool>();
    } else if (key == "abbreviations_path") {
      config.abbreviations_path = std::filesystem::path(value.get<std::string>());
    } else {
      throw InputError("unknown config field '" + key + "' in " + path.string());
    }
  }
  return config;
}

void apply_env(Config& config) {
  if (const char* dir = std::getenv("NAMEVO_CACHE_DIR"); dir && *dir) {
    config.cache_dir = dir;
  }
  if (const char* offline = std::getenv("NAMEVO_OFFLINE"); offline && *offline) {
    std::string value = fold(offline);
    config.offline = value == "1" || value == "true" || value == "yes";
  }
}

}  // namespace namevo
