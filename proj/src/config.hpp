#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace degwave {

/// Flat `dotted.key = value` experiment file. '#' starts a comment. Unknown
/// keys and duplicate keys are rejected at parse time.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::size_t get_count(const std::string& key) const;
  std::size_t get_count(const std::string& key, std::size_t fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  const std::string& origin() const { return origin_; }

  static const std::vector<std::string>& known_keys();

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
};

}  // namespace degwave
