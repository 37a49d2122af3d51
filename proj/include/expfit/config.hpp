#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace expfit {

/// Flat key=value run configuration. Format: UTF-8 lines, '#' starts a
/// comment, arrays are comma lists. Unknown keys are kept (callers may probe).
class Config {
 public:
  static Config parse(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double dflt) const;
  long long get_int(const std::string& key) const;
  long long get_int_or(const std::string& key, long long dflt) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool_or(const std::string& key, bool dflt) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<long long> get_int_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace expfit
