#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace hmrfcs::cli {

/// Flat `key=value` file. Blank lines and lines starting with '#' are
/// ignored; keys are long flag names without the leading dashes.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

ConfigEntries load_config_file(const std::filesystem::path& path);

}  // namespace hmrfcs::cli
