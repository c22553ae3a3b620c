#pragma once

#include <string>
#include <vector>

namespace geoflow::io {

/// Time series with a fixed column schema; the first column is time.
class Trace {
 public:
  explicit Trace(std::vector<std::string> columns);

  /// Throws std::invalid_argument on a width mismatch, a non-finite value, or a time
  /// that does not strictly exceed the previous row's.
  void add(std::vector<double> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  const std::vector<double>& back() const { return rows_.back(); }

  /// Header plus one line per row, shortest round-trip doubles, LF endings.
  std::string csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

void write_trace(const Trace& trace, const std::string& path);

}  // namespace geoflow::io
