#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gridtariff {

enum class DwellingType : std::uint8_t { AP, H };
enum class Occupancy : std::uint8_t { P1, P2, P3, P5plus };
enum class AreaBand : std::uint8_t { A1, A2, A3 };
enum class IncomeBand : std::uint8_t { E1, E2, E3 };

// Identity of one socio-techno-economic consumer category.
//
// The canonical label is "<dwelling>_<occupancy>_<area>_<income>_EV<0|1>_HP<0|1>",
// e.g. "Ap_P1_A1_€1_EV0_HP0" or "H_P5+_A3_€3_EV1_HP0". Ordering of keys is the
// byte-wise ordering of their canonical labels, so sorted containers of keys
// iterate in report order.
struct CategoryKey {
  DwellingType dwelling_type = DwellingType::AP;
  Occupancy occupancy = Occupancy::P1;
  AreaBand area_band = AreaBand::A1;
  IncomeBand income_band = IncomeBand::E1;
  bool ev = false;
  bool hp = false;

  std::string label() const;

  friend bool operator==(const CategoryKey&, const CategoryKey&) = default;
  friend std::strong_ordering operator<=>(const CategoryKey& a, const CategoryKey& b);
};

// Parses the canonical label; nullopt when malformed.
std::optional<CategoryKey> parse_category_label(std::string_view label);

// Token forms used in the label ("Ap", "P5+", "A2", "€3", "EV1", "HP0").
std::string_view label_token(DwellingType v);
std::string_view label_token(Occupancy v);
std::string_view label_token(AreaBand v);
std::string_view label_token(IncomeBand v);

// Token forms used in categories.csv ("AP", "P5+", "A2", "E3").
std::string_view csv_token(DwellingType v);
std::string_view csv_token(Occupancy v);
std::string_view csv_token(AreaBand v);
std::string_view csv_token(IncomeBand v);

std::optional<DwellingType> parse_dwelling_csv(std::string_view s);
std::optional<Occupancy> parse_occupancy_csv(std::string_view s);
std::optional<AreaBand> parse_area_csv(std::string_view s);
std::optional<IncomeBand> parse_income_csv(std::string_view s);

}  // namespace gridtariff
