#include "gamemark/util/config.hpp"

#include <fstream>
#include <sstream>

#include "gamemark/error.hpp"

namespace gamemark::util {

namespace {
std::string trim(const std::string& s) {
  const std::size_t first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const std::size_t last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}
}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(line_number) +
                       ": expected key = value");
    const std::string key = trim(trimmed.substr(0, eq));
    if (key.empty())
      throw ParseError("config line " + std::to_string(line_number) + ": empty key");
    cfg.values_[key] = trim(trimmed.substr(eq + 1));
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return values_.contains(key); }

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParseError("config: missing required key '" + key + "'");
  return it->second;
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw ParseError("config: '" + key + "' is not an integer");
  }
}

long long Config::get_int64(const std::string& key, long long fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    throw ParseError("config: '" + key + "' is not an integer");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ParseError("config: '" + key + "' is not a number");
  }
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

}  // namespace gamemark::util
