#pragma once

// `key = value` configuration files for the CLI. Blank lines and anything
// after '#' are ignored. Recognised keys: freq_threshold, amp_threshold, gain.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace weberbits {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::optional<double> freq_threshold;
  std::optional<double> amp_threshold;
  std::optional<double> gain;
};

namespace config_detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace config_detail

inline Config parse_config(std::istream& in, std::string_view source = "config") {
  using config_detail::trim;
  Config cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (line_no == 1 && text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;

    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    const auto key = trim(text.substr(0, eq));
    const auto raw = trim(text.substr(eq + 1));

    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (raw.empty() || ec != std::errc{} || ptr != raw.data() + raw.size()) {
      throw ConfigError(where + ": '" + std::string(raw) + "' is not a number");
    }

    if (key == "freq_threshold") {
      cfg.freq_threshold = value;
    } else if (key == "amp_threshold") {
      cfg.amp_threshold = value;
    } else if (key == "gain") {
      cfg.gain = value;
    } else {
      throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

inline Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

}  // namespace weberbits
