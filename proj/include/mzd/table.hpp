#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mzd {

/// Rectangular numeric table with a metadata block. Serialized as CSV with
/// `# key: value` header lines.
class OutputTable {
 public:
  explicit OutputTable(std::vector<std::string> headers) : headers_(std::move(headers)) {}

  void set_metadata(const std::string& key, const std::string& value);
  /// Throws std::invalid_argument on a width mismatch or a non-finite cell.
  void add_row(std::vector<double> row);

  const std::vector<std::string>& headers() const { return headers_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }
  /// Empty string when the key is absent.
  std::string metadata_value(const std::string& key) const;
  std::size_t column(const std::string& header) const;

  std::string to_csv() const;

 private:
  std::vector<std::string> headers_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

/// printf %.12g; -0 is printed as 0.
std::string format_number(double value);

}  // namespace mzd
