#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thermoshift/exact.hpp"

namespace thermoshift {

struct ConfigEntry {
  std::string key, value;
  int line = 0;
};

/// `[kind name]` section of the line-oriented config format.
struct ConfigSection {
  std::string kind, name;
  int line = 0;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(const std::string& key) const;
  /// Value of a required key; error names the section and line.
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::vector<const ConfigEntry*> all(const std::string& key) const;
};

struct Config {
  std::string origin;
  std::vector<ConfigSection> sections;

  const ConfigSection* find(const std::string& kind,
                            const std::string& name) const;
  const ConfigSection& require(const std::string& kind,
                               const std::string& name) const;
  std::vector<const ConfigSection*> of_kind(const std::string& kind) const;
};

Config parse_config_text(const std::string& text, const std::string& origin);
Config parse_config_file(const std::string& path);

/// Split on a separator character, trimming whitespace around pieces.
std::vector<std::string> split_list(const std::string& s, char sep);
std::vector<std::string> split_ws(const std::string& s);

}  // namespace thermoshift
