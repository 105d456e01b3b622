#include "config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace degwave {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::config_error, msg); }

}  // namespace

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = {
      "experiment", "coeff.kind", "coeff.K",     "coeff.h",       "coeff.c",
      "coeff.table_path",         "mesh.n",      "mesh.p",        "time.T",
      "time.dt",    "data.kind",  "data.seed",   "data.path",     "data.ensemble",
      "hum.tol",    "hum.max_iter",              "out.dir",       "sweep.K_grid",
      "identity.which"};
  return keys;
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) config_error(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& known = known_keys();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      config_error(where + ": unknown key '" + key + "'");
    }
    if (cfg.has(key)) config_error(where + ": duplicate key '" + key + "'");
    if (value.empty()) config_error(where + ": empty value for key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) config_error("missing required key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    config_error("key '" + key + "': '" + s + "' is not a finite number");
  }
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::size_t Config::get_count(const std::string& key) const {
  const std::string s = get_string(key);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE || v < 0) {
    config_error("key '" + key + "': '" + s + "' is not a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

std::size_t Config::get_count(const std::string& key, std::size_t fallback) const {
  return has(key) ? get_count(key) : fallback;
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 0);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE || s.front() == '-') {
    config_error("key '" + key + "': '" + s + "' is not a 64-bit unsigned integer");
  }
  return v;
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !std::isfinite(v)) {
      config_error("key '" + key + "': '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.empty()) config_error("key '" + key + "': empty list");
  return out;
}

}  // namespace degwave
