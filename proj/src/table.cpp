#include "mzd/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mzd {

void OutputTable::set_metadata(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata_.emplace_back(key, value);
}

void OutputTable::add_row(std::vector<double> row) {
  if (row.size() != headers_.size()) {
    throw std::invalid_argument("OutputTable: row width does not match headers");
  }
  if (!std::all_of(row.begin(), row.end(), [](double x) { return std::isfinite(x); })) {
    throw std::invalid_argument("OutputTable: non-finite value in row");
  }
  rows_.push_back(std::move(row));
}

std::string OutputTable::metadata_value(const std::string& key) const {
  for (const auto& [k, v] : metadata_) {
    if (k == key) return v;
  }
  return {};
}

std::size_t OutputTable::column(const std::string& header) const {
  const auto it = std::find(headers_.begin(), headers_.end(), header);
  if (it == headers_.end()) throw std::out_of_range("OutputTable: no column " + header);
  return static_cast<std::size_t>(it - headers_.begin());
}

std::string format_number(double value) {
  if (value == 0) value = 0;  // drop the sign of -0
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

std::string OutputTable::to_csv() const {
  std::string out;
  for (const auto& [k, v] : metadata_) {
    out += "# " + k + ": " + v + "\n";
  }
  for (std::size_t i = 0; i < headers_.size(); ++i) {
    if (i) out += ',';
    out += headers_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace mzd
