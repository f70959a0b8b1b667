#include "multiplan/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace multiplan {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.emplace_back(trim(cur));
  return out;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

CsvTable CsvTable::parse(std::string_view text, std::string source) {
  CsvTable t;
  t.source_ = std::move(source);
  std::size_t line_no = 0;
  bool have_header = false;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      // Strip a UTF-8 byte order mark some GTFS exporters emit.
      if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
      t.header_ = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header_.size()) {
      throw LoadError(t.source_ + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(t.header_.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    t.rows_.push_back(std::move(fields));
    t.lines_.push_back(line_no);
  }
  if (!have_header) throw LoadError(t.source_ + ": missing header row");
  return t;
}

CsvTable CsvTable::read(const std::filesystem::path& file) {
  return parse(read_text_file(file), file.string());
}

bool CsvTable::has_column(std::string_view name) const {
  for (const auto& h : header_) {
    if (h == name) return true;
  }
  return false;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw LoadError(source_ + ": missing column '" + std::string(name) + "'");
}

const std::string& CsvTable::at(std::size_t row, std::size_t col) const {
  return rows_.at(row).at(col);
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  try {
    return parse_double(at(row, col));
  } catch (const std::invalid_argument&) {
    throw LoadError(source_ + ":" + std::to_string(lines_[row]) + ": column '" + header_[col] +
                    "' is not a number: '" + at(row, col) + "'");
  }
}

long long CsvTable::integer(std::size_t row, std::size_t col) const {
  const auto& s = at(row, col);
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw LoadError(source_ + ":" + std::to_string(lines_[row]) + ": column '" + header_[col] +
                    "' is not an integer: '" + s + "'");
  }
  return v;
}

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw LoadError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& file, std::string_view text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, p);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace multiplan
