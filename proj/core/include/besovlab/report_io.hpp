#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace besovlab {

/// Shortest round-trip decimal form of a double ("inf", "-inf", "nan" for non-finite).
std::string format_double(double v);

using CsvValue = std::variant<double, std::int64_t, std::string>;

/// CSV writer whose first line is "# schema=<name>" followed by a header row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::string_view schema, std::vector<std::string> columns);
  void row(const std::vector<CsvValue>& values);
  void row(std::initializer_list<double> values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

/// Parsed CSV: schema string, header and raw string cells.
struct CsvTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

void write_f64_le(std::ostream& out, std::span<const double> values);
std::vector<double> read_f64_le(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of a file's bytes. Throws NotFoundError if unreadable.
std::string sha256_file(const std::filesystem::path& path);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static line chart. log_y plots log10(y) and drops non-positive points.
void write_svg_chart(const std::filesystem::path& path, std::string_view title, std::string_view x_label,
                     std::string_view y_label, const std::vector<SvgSeries>& series, bool log_y);

}  // namespace besovlab
