#include "gridtariff/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "gridtariff/error.hpp"

namespace gridtariff::csv {

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<long long> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  long long value = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void for_each_row(const std::filesystem::path& path, const std::vector<std::string>& expected_header,
                  const RowFn& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());

  const std::string name = path.filename().string();
  std::vector<std::string> header;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (header.empty()) {
      if (line_no == 1 && cells.front().starts_with("\xEF\xBB\xBF")) cells.front().erase(0, 3);
      header = cells;
      if (!expected_header.empty() && header != expected_header) {
        std::string want;
        for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
        throw Error(ErrorCode::SchemaViolation, name + ": expected header '" + want + "'");
      }
      continue;
    }
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::SchemaViolation, name + ":" + std::to_string(line_no) + ": expected " +
                                                  std::to_string(header.size()) + " columns");
    }
    fn(cells, line_no);
  }
  if (header.empty()) throw Error(ErrorCode::SchemaViolation, name + ": empty file");
}

Table read_table(const std::filesystem::path& path, const std::vector<std::string>& expected_header) {
  Table table;
  for_each_row(path, expected_header, [&](const std::vector<std::string>& cells, std::size_t line_no) {
    table.rows.push_back(cells);
    table.line_numbers.push_back(line_no);
  });
  if (!expected_header.empty()) {
    table.header = expected_header;
  } else {
    std::ifstream in(path, std::ios::binary);
    std::string first;
    std::getline(in, first);
    if (!first.empty() && first.back() == '\r') first.pop_back();
    if (first.starts_with("\xEF\xBB\xBF")) first.erase(0, 3);
    table.header = split_row(first);
  }
  return table;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace gridtariff::csv
