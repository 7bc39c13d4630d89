#include "cli/config_file.hpp"

#include <fstream>

#include "hmrfcs/error.hpp"

namespace hmrfcs::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ConfigEntries load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::file_not_found, path.string());

  ConfigEntries entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    std::string key = eq == std::string::npos ? std::string{} : trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::invalid_argument,
                  path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    entries.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return entries;
}

}  // namespace hmrfcs::cli
