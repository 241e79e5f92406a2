#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlcauchy {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration with dotted section prefixes, one pair
/// per line, '#' comments. Keys are validated against the full whitelist on
/// every set, so typos fail loudly at parse time rather than silently using
/// a default. Values stay verbatim strings; serialization is sorted and
/// therefore a fixed point of parse+serialize.
class Config {
 public:
  static const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "backend.kind",      "backend.size",      "backend.lambda_re", "backend.lambda_im",
        "backend.eigenvalues",
        "spectral.rho0",     "spectral.phi0",     "spectral.m_const",
        "contour.d",         "contour.margin",
        "quadrature.N",      "quadrature.alpha",
        "collocation.n",
        "functional.kind",   "functional.mu",     "functional.points", "functional.coeffs",
        "functional.time_rule", "functional.gl_points",
        "solver.tol",        "solver.max_iter",
        "output.csv",        "output.eval_m",
        "workers",
        "expm.n_list",       "expm.ts",
        "converge.n_list",   "converge.N_list",
        "bench.workers_list", "bench.repeats",
    };
    return keys;
  }

  static Config parse_string(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const std::size_t eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty())
        throw config_error("config line " + std::to_string(line_no) + ": empty key");
      c.set(key, value);
    }
    return c;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
  }

  void set(const std::string& key, const std::string& value) {
    if (!known_keys().count(key)) throw config_error("unknown config key: " + key);
    kv_[key] = value;
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback = {}) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return parse_double(key, it->second);
  }

  int get_int(const std::string& key, int fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return parse_int(key, it->second);
  }

  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback = {}) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<double> out;
    for (const std::string& part : split(it->second)) out.push_back(parse_double(key, part));
    return out;
  }

  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback = {}) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<int> out;
    for (const std::string& part : split(it->second)) out.push_back(parse_int(key, part));
    return out;
  }

  std::string serialize() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
      out += k;
      out += " = ";
      out += v;
      out += '\n';
    }
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  static std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  }

  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
      const std::string t = trim(cur);
      if (!t.empty()) out.push_back(t);
    }
    return out;
  }

  static double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
      throw config_error("config key " + key + ": not a number: '" + value + "'");
    return v;
  }

  static int parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
      throw config_error("config key " + key + ": not an integer: '" + value + "'");
    return static_cast<int>(v);
  }

  std::map<std::string, std::string> kv_;
};

}  // namespace nlcauchy
