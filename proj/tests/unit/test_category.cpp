#include <doctest.h>

#include "fixtures.hpp"
#include "gridtariff/category.hpp"
#include "gridtariff/synthgen.hpp"

using namespace gridtariff;

TEST_CASE("label round trip over the whole taxonomy") {
  int count = 0;
  for (auto dw : {DwellingType::AP, DwellingType::H}) {
    for (auto oc : {Occupancy::P1, Occupancy::P2, Occupancy::P3, Occupancy::P5plus}) {
      for (auto ar : {AreaBand::A1, AreaBand::A2, AreaBand::A3}) {
        for (auto in : {IncomeBand::E1, IncomeBand::E2, IncomeBand::E3}) {
          for (bool ev : {false, true}) {
            for (bool hp : {false, true}) {
              const CategoryKey k{dw, oc, ar, in, ev, hp};
              const auto back = parse_category_label(k.label());
              REQUIRE(back.has_value());
              CHECK(*back == k);
              ++count;
            }
          }
        }
      }
    }
  }
  CHECK(count == 288);
}

TEST_CASE("canonical label spelling") {
  CHECK(CategoryKey{}.label() == "Ap_P1_A1_€1_EV0_HP0");
  const CategoryKey k{DwellingType::H, Occupancy::P5plus, AreaBand::A3, IncomeBand::E3, true, false};
  CHECK(k.label() == "H_P5+_A3_€3_EV1_HP0");
}

TEST_CASE("every observed label parses and re-serialises bit-exactly") {
  const auto& labels = observed_category_labels();
  CHECK(labels.size() == 90);
  for (const auto& l : labels) {
    const auto k = parse_category_label(l);
    REQUIRE_MESSAGE(k.has_value(), l);
    CHECK(k->label() == l);
  }
}

TEST_CASE("malformed labels are rejected") {
  for (const char* bad : {"", "Ap_P1_A1_€1_EV0", "Ap_P4_A1_€1_EV0_HP0", "AP_P1_A1_€1_EV0_HP0",
                          "Ap_P1_A1_E1_EV0_HP0", "Ap_P1_A1_€1_EV2_HP0", "Ap_P1_A1_€1_EV0_HP0_x"}) {
    CHECK_FALSE(parse_category_label(bad).has_value());
  }
}

TEST_CASE("key ordering follows the label bytes") {
  const auto a = fixture::key("Ap_P1_A1_€1_EV0_HP0");
  const auto b = fixture::key("Ap_P1_A1_€1_EV0_HP1");
  const auto c = fixture::key("H_P1_A1_€1_EV0_HP0");
  CHECK(a < b);
  CHECK(b < c);
}

TEST_CASE("csv tokens") {
  CHECK(parse_dwelling_csv("AP") == DwellingType::AP);
  CHECK(parse_occupancy_csv("P5+") == Occupancy::P5plus);
  CHECK(parse_area_csv("A2") == AreaBand::A2);
  CHECK(parse_income_csv("E3") == IncomeBand::E3);
  CHECK_FALSE(parse_income_csv("€3").has_value());
  CHECK(csv_token(DwellingType::H) == "H");
  CHECK(label_token(IncomeBand::E2) == "€2");
}
