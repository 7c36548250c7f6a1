#pragma once

#include <string>
#include <vector>

namespace climact {

/// In-memory CSV with file/line context for error messages. No quoting:
/// fields must not contain commas or newlines (names and numbers in the
/// documented schemas never do).
struct CsvTable {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index or -1.
  int col(const std::string& name) const;
  /// Column index; throws std::invalid_argument naming path and column.
  int require_col(const std::string& name) const;
  /// 1-based file line of a data row.
  std::size_t line_of(std::size_t row) const { return row + 2; }

  const std::string& cell(std::size_t row, int column) const {
    return rows[row][static_cast<std::size_t>(column)];
  }
  double number(std::size_t row, int column) const;
  int bit(std::size_t row, int column) const;
  std::string context(std::size_t row) const;
};

CsvTable read_csv(const std::string& path);

/// Shortest representation that round-trips to the same double.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace climact
