#pragma once

#include <map>
#include <string>
#include <vector>

namespace gamemark::util {

// Flat key = value configuration files: one pair per line, '#' comments,
// whitespace-trimmed keys and values, dotted keys for grouping.
class Config {
 public:
  static Config load(const std::string& path);
  static Config parse(const std::string& text);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  long long get_int64(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;

  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace gamemark::util
