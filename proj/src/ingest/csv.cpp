#include "climact/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace climact {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int CsvTable::col(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int CsvTable::require_col(const std::string& name) const {
  const int i = col(name);
  if (i < 0)
    throw std::invalid_argument(path + ": missing column '" + name + "'");
  return i;
}

std::string CsvTable::context(std::size_t row) const {
  return path + ":" + std::to_string(line_of(row));
}

double CsvTable::number(std::size_t row, int column) const {
  const std::string& s = cell(row, column);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument(context(row) + ": bad number '" + s +
                                "' in column '" + header[column] + "'");
  return v;
}

int CsvTable::bit(std::size_t row, int column) const {
  const std::string& s = cell(row, column);
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw std::invalid_argument(context(row) + ": expected 0/1 in column '" +
                              header[column] + "', got '" + s + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument(path + ": cannot open file");
  CsvTable t;
  t.path = path;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      t.header = split_line(line);
      first = false;
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != t.header.size())
      throw std::invalid_argument(
          path + ":" + std::to_string(t.rows.size() + 2) + ": expected " +
          std::to_string(t.header.size()) + " fields, got " +
          std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
  }
  if (first) throw std::invalid_argument(path + ": empty file");
  return t;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument(path + ": cannot open for writing");
  out << content;
  if (!out) throw std::invalid_argument(path + ": write failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace climact
