#include "geoflow/io/trace.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "geoflow/error.hpp"

namespace geoflow::io {

Trace::Trace(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("trace needs at least a time column");
}

void Trace::add(std::vector<double> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("trace row has " + std::to_string(row.size()) + " values for " +
                                std::to_string(columns_.size()) + " columns");
  }
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (!std::isfinite(row[c])) throw std::invalid_argument("trace value for '" + columns_[c] + "' is not finite");
  }
  if (!rows_.empty() && !(row[0] > rows_.back()[0])) {
    throw std::invalid_argument("trace time must increase strictly");
  }
  rows_.push_back(std::move(row));
}

std::string Trace::csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (c) out += ',';
    out += columns_[c];
  }
  out += '\n';
  char buf[32];
  for (const auto& row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, row[c]);
      (void)ec;
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

void write_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write trace '" + path + "'");
  out << trace.csv();
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace geoflow::io
