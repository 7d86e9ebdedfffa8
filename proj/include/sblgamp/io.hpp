#pragma once

#include <map>
#include <string>
#include <vector>

#include "sblgamp/model.hpp"

namespace sblgamp::io {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Strict double parse; the whole token must be consumed.
double parse_double(const std::string& token, const std::string& context);

// Matrices are CSV (one row per matrix row, no header) or raw little-endian
// binary (uint32 rows, uint32 cols, then row-major float64 payload), chosen
// by the .bin extension. Vectors are single-column files of either kind.

Matrix load_matrix(const std::string& path);
Vector load_vector(const std::string& path);
void save_matrix(const std::string& path, const Matrix& m);
void save_vector(const std::string& path, const Vector& v);

/// Flat key = value configuration file with dotted section keys.
/// '#' starts a comment; blank lines are ignored. Duplicate keys are errors.
class KvConfig {
 public:
  static KvConfig parse_file(const std::string& path);
  static KvConfig parse_text(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const { return values_.at(key); }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  const std::map<std::string, std::string>& values() const { return values_; }

  /// Keys present in the config but not in `known`, sorted.
  std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const;

  /// Serializes back to the same text format (sorted keys).
  std::string to_text() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace sblgamp::io
