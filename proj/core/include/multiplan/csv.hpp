#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace multiplan {

struct LoadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal comma-separated reader: header row, no embedded newlines, optional
// double-quoted fields.
class CsvTable {
 public:
  static CsvTable parse(std::string_view text, std::string source = "<memory>");
  static CsvTable read(const std::filesystem::path& file);

  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }
  // 1-based line number of row i in the source, for error messages.
  std::size_t line_of(std::size_t i) const { return lines_[i]; }

  // Index of a header column; throws LoadError naming the column when absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;

  const std::string& at(std::size_t row, std::size_t col) const;
  double number(std::size_t row, std::size_t col) const;
  long long integer(std::size_t row, std::size_t col) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);
std::string read_text_file(const std::filesystem::path& file);
void write_text_file(const std::filesystem::path& file, std::string_view text);

// Shortest text that parses back to exactly the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

}  // namespace multiplan
