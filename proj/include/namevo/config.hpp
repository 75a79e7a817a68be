#pragma once

#include <filesystem>
#include <optional>
#include <string>

// Pipeline configuration. Precedence: command-line flags > environment
// variables (NAMEVO_CACHE_DIR, NAMEVO_OFFLINE) > config file > defaults.

namespace namevo {

struct Config {
  std::filesystem::path cache_dir = "cache";
  std::string api_base = "https://en.wikipedia.org/w/api.php";
  std::string user_agent = "namevo/0.1 (name evolution research tool)";
  double rate_limit = 1.0;  // requests per second
  int workers = 0;          // 0 = all hardware threads
  bool offline = false;
  std::optional<std::filesystem::path> abbreviations_path;
};

// Reads a flat JSON object with the field names above; unknown fields are
// rejected so typos do not silently fall back to defaults.
Config load_config_file(const std::filesystem::path& path);

// Overlays NAMEVO_CACHE_DIR and NAMEVO_OFFLINE (1/true/yes, case-insensitive).
void apply_env(Config& config);

}  // namespace namevo
