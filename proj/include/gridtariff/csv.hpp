#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridtariff::csv {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Splits one line; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_row(std::string_view line);

// Quotes a field when it contains a comma or a double quote.
std::string quote(std::string_view field);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

using RowFn = std::function<void(const std::vector<std::string>& cells, std::size_t line_no)>;

// Streams data rows of a plain comma-separated file (RFC 4180 quoting, no embedded newlines) to `fn`.
// Throws MissingFile or SchemaViolation; the header must match
// `expected_header` exactly when given.
void for_each_row(const std::filesystem::path& path, const std::vector<std::string>& expected_header,
                  const RowFn& fn);

// Reads a plain comma-separated file (RFC 4180 quoting, no embedded newlines). Throws MissingFile or
// SchemaViolation; the header must match `expected_header` exactly when given.
Table read_table(const std::filesystem::path& path,
                 const std::vector<std::string>& expected_header = {});

// Throws IoFailure.
void write_text(const std::filesystem::path& path, const std::string& content);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace gridtariff::csv
