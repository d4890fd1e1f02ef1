#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ssflow {

// Flat INI-style configuration: [section] headers, key = value lines,
// comments with '#' or ';'.  Values stay strings until a typed getter is
// called; unknown keys are collected so the CLI can warn instead of silently
// ignoring typos.
struct Config {
  std::map<std::string, std::map<std::string, std::string>> kv;

  static std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static Config parse(std::istream& in, const std::string& origin) {
    Config c;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t cut = line.find_first_of("#;");
      if (cut != std::string::npos) line = line.substr(0, cut);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError(origin + ":" + std::to_string(lineno) +
                            ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        c.kv[section];
        continue;
      }
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string val = trim(line.substr(eq + 1));
      if (key.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": empty key");
      c.kv[section][key] = val;
    }
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    return parse(f, path);
  }
  static Config from_string(const std::string& text) {
    std::istringstream s(text);
    return parse(s, "<inline>");
  }

  bool has(const std::string& sec, const std::string& key) const {
    auto s = kv.find(sec);
    return s != kv.end() && s->second.count(key) > 0;
  }
  std::string get_str(const std::string& sec, const std::string& key,
                      const std::string& def) const {
    auto s = kv.find(sec);
    if (s == kv.end()) return def;
    auto k = s->second.find(key);
    return k == s->second.end() ? def : k->second;
  }
  double get_double(const std::string& sec, const std::string& key,
                    double def) const {
    if (!has(sec, key)) return def;
    const std::string& v = kv.at(sec).at(key);
    try {
      std::size_t pos = 0;
      double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("[" + sec + "] " + key + ": not a number: " + v);
    }
  }
  int get_int(const std::string& sec, const std::string& key, int def) const {
    if (!has(sec, key)) return def;
    const std::string& v = kv.at(sec).at(key);
    try {
      std::size_t pos = 0;
      int d = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("[" + sec + "] " + key + ": not an integer: " + v);
    }
  }
  bool get_bool(const std::string& sec, const std::string& key,
                bool def) const {
    if (!has(sec, key)) return def;
    std::string v = kv.at(sec).at(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("[" + sec + "] " + key + ": not a boolean: " + v);
  }
  std::vector<double> get_list(const std::string& sec, const std::string& key,
                               const std::vector<double>& def) const {
    if (!has(sec, key)) return def;
    std::vector<double> out;
    std::stringstream ss(kv.at(sec).at(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("[" + sec + "] " + key + ": bad list entry: " + item);
      }
    }
    if (out.empty())
      throw ConfigError("[" + sec + "] " + key + ": empty list");
    return out;
  }
};

// Output directory resolution: CLI flag > environment > config > default.
inline std::string resolve_outdir(const std::string& cli_value,
                                  const Config& cfg) {
  if (!cli_value.empty()) return cli_value;
  if (const char* env = std::getenv("SSFLOW_OUT"); env && *env) return env;
  return cfg.get_str("run", "out", "out");
}

}  // namespace ssflow
