#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlcauchy {

/// Round-trip decimal formatting: 17 significant digits reproduce the exact
/// binary double, so byte-equal files mean bit-equal numbers. NaN is written
/// as the fixed sentinel "nan" regardless of platform spelling.
inline std::string fmt_g17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_csv(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

/// Writes header + rows with LF endings; throws on I/O failure so commands
/// surface a broken output path instead of silently dropping results.
inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::string>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << header << '\n';
  for (const std::string& r : rows) out << r << '\n';
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace nlcauchy
