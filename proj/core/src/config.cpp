#include "thermoshift/config.hpp"

#include <fstream>
#include <sstream>

namespace thermoshift {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

const ConfigEntry* ConfigSection::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

const std::string& ConfigSection::get(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e)
    throw Error("section [" + kind + " " + name + "] (line " +
                std::to_string(line) + ") misses key '" + key + "'");
  return e->value;
}

std::string ConfigSection::get_or(const std::string& key,
                                  const std::string& fallback) const {
  const ConfigEntry* e = find(key);
  return e ? e->value : fallback;
}

std::vector<const ConfigEntry*> ConfigSection::all(const std::string& key) const {
  std::vector<const ConfigEntry*> out;
  for (const auto& e : entries)
    if (e.key == key) out.push_back(&e);
  return out;
}

const ConfigSection* Config::find(const std::string& kind,
                                  const std::string& name) const {
  for (const auto& s : sections)
    if (s.kind == kind && s.name == name) return &s;
  return nullptr;
}

const ConfigSection& Config::require(const std::string& kind,
                                     const std::string& name) const {
  const ConfigSection* s = find(kind, name);
  if (!s) throw Error(origin + ": undefined " + kind + " '" + name + "'");
  return *s;
}

std::vector<const ConfigSection*> Config::of_kind(const std::string& kind) const {
  std::vector<const ConfigSection*> out;
  for (const auto& s : sections)
    if (s.kind == kind) out.push_back(&s);
  return out;
}

Config parse_config_text(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin = origin;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  ConfigSection* cur = nullptr;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw Error(origin + ":" + std::to_string(lineno) +
                    ": unterminated section header");
      const std::string head = trim(line.substr(1, line.size() - 2));
      const size_t sp = head.find_first_of(" \t");
      ConfigSection s;
      s.line = lineno;
      if (sp == std::string::npos) {
        s.kind = head;
      } else {
        s.kind = head.substr(0, sp);
        s.name = trim(head.substr(sp + 1));
      }
      if (s.kind.empty())
        throw Error(origin + ":" + std::to_string(lineno) +
                    ": empty section kind");
      cfg.sections.push_back(std::move(s));
      cur = &cfg.sections.back();
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(origin + ":" + std::to_string(lineno) +
                  ": expected 'key = value'");
    if (!cur)
      throw Error(origin + ":" + std::to_string(lineno) +
                  ": entry before any section header");
    ConfigEntry e;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty())
      throw Error(origin + ":" + std::to_string(lineno) + ": empty key");
    cur->entries.push_back(std::move(e));
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  const std::string last = trim(cur);
  if (!last.empty() || !out.empty()) out.push_back(last);
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace thermoshift
