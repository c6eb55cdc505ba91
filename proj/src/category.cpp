#include "gridtariff/category.hpp"

#include <array>
#include <vector>

namespace gridtariff {
namespace {

constexpr std::array<std::string_view, 2> kDwellingLabel = {"Ap", "H"};
constexpr std::array<std::string_view, 4> kOccupancyLabel = {"P1", "P2", "P3", "P5+"};
constexpr std::array<std::string_view, 3> kAreaLabel = {"A1", "A2", "A3"};
constexpr std::array<std::string_view, 3> kIncomeLabel = {"€1", "€2", "€3"};

constexpr std::array<std::string_view, 2> kDwellingCsv = {"AP", "H"};
constexpr std::array<std::string_view, 3> kIncomeCsv = {"E1", "E2", "E3"};

template <typename Enum, std::size_t N>
std::optional<Enum> find_token(const std::array<std::string_view, N>& tokens, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (tokens[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<bool> parse_flag(std::string_view token, std::string_view prefix) {
  if (token.size() != prefix.size() + 1 || token.substr(0, prefix.size()) != prefix) {
    return std::nullopt;
  }
  char c = token.back();
  if (c == '0') return false;
  if (c == '1') return true;
  return std::nullopt;
}

}  // namespace

std::string_view label_token(DwellingType v) { return kDwellingLabel[static_cast<int>(v)]; }
std::string_view label_token(Occupancy v) { return kOccupancyLabel[static_cast<int>(v)]; }
std::string_view label_token(AreaBand v) { return kAreaLabel[static_cast<int>(v)]; }
std::string_view label_token(IncomeBand v) { return kIncomeLabel[static_cast<int>(v)]; }

std::string_view csv_token(DwellingType v) { return kDwellingCsv[static_cast<int>(v)]; }
std::string_view csv_token(Occupancy v) { return kOccupancyLabel[static_cast<int>(v)]; }
std::string_view csv_token(AreaBand v) { return kAreaLabel[static_cast<int>(v)]; }
std::string_view csv_token(IncomeBand v) { return kIncomeCsv[static_cast<int>(v)]; }

std::optional<DwellingType> parse_dwelling_csv(std::string_view s) {
  return find_token<DwellingType>(kDwellingCsv, s);
}
std::optional<Occupancy> parse_occupancy_csv(std::string_view s) {
  return find_token<Occupancy>(kOccupancyLabel, s);
}
std::optional<AreaBand> parse_area_csv(std::string_view s) {
  return find_token<AreaBand>(kAreaLabel, s);
}
std::optional<IncomeBand> parse_income_csv(std::string_view s) {
  return find_token<IncomeBand>(kIncomeCsv, s);
}

std::string CategoryKey::label() const {
  std::string out;
  out.reserve(24);
  out += label_token(dwelling_type);
  out += '_';
  out += label_token(occupancy);
  out += '_';
  out += label_token(area_band);
  out += '_';
  out += label_token(income_band);
  out += ev ? "_EV1" : "_EV0";
  out += hp ? "_HP1" : "_HP0";
  return out;
}

std::strong_ordering operator<=>(const CategoryKey& a, const CategoryKey& b) {
  return a.label() <=> b.label();
}

std::optional<CategoryKey> parse_category_label(std::string_view label) {
  auto parts = split(label, '_');
  if (parts.size() != 6) return std::nullopt;
  auto dwelling = find_token<DwellingType>(kDwellingLabel, parts[0]);
  auto occupancy = find_token<Occupancy>(kOccupancyLabel, parts[1]);
  auto area = find_token<AreaBand>(kAreaLabel, parts[2]);
  auto income = find_token<IncomeBand>(kIncomeLabel, parts[3]);
  auto ev = parse_flag(parts[4], "EV");
  auto hp = parse_flag(parts[5], "HP");
  if (!dwelling || !occupancy || !area || !income || !ev || !hp) return std::nullopt;
  return CategoryKey{*dwelling, *occupancy, *area, *income, *ev, *hp};
}

}  // namespace gridtariff
