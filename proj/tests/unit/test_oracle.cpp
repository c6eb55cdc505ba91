#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gridtariff/error.hpp"
#include "gridtariff/oracle.hpp"

using namespace gridtariff;

namespace {

// Small random instance: T <= 24, up to four categories, loads on a coarse
// grid so that threshold and trigger ties actually occur.
Dataset random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> hours(2, 24), cats(1, 4), n(1, 50), step(0, 12), mw(0, 6);
  const int T = hours(rng);
  const auto& labels = observed_category_labels();
  std::vector<std::string> pick(labels.begin(), labels.end());
  std::shuffle(pick.begin(), pick.end(), rng);
  std::vector<CategoryRecord> records;
  const int k = cats(rng);
  for (int c = 0; c < k; ++c) {
    HourlySeries kwh(T);
    for (int t = 0; t < T; ++t) kwh[t] = 0.25 * step(rng);
    records.push_back({fixture::key(pick[static_cast<std::size_t>(c)]), static_cast<std::uint64_t>(n(rng)), kwh});
  }
  HourlySeries load(T);
  do {
    for (int t = 0; t < T; ++t) load[t] = 100.0 + 10.0 * mw(rng);
  } while (load.minCoeff() == load.maxCoeff());
  return Dataset(2017, std::move(records), SystemLoad{load});
}

ScenarioSpec random_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3), step(1, 12);
  std::uniform_real_distribution<double> p(0.02, 1.0), f(0.5, 1.0), gt(5.0, 40.0);
  DesignSpec design;
  switch (kind(rng)) {
    case 0: design = DesignSpec::flat(); break;
    case 1: design = DesignSpec::ipp(0.25 * step(rng)); break;
    case 2: design = DesignSpec::dcpp(p(rng)); break;
    default: design = DesignSpec::dcipp(0.25 * step(rng), p(rng)); break;
  }
  const double rate = gt(rng);
  return {scenario_name(design), design, {rate, f(rng)}, rate};
}

}  // namespace

TEST_CASE("engine agrees with the naive oracle on random small instances") {
  std::mt19937_64 rng(20170101);
  int solved = 0, infeasible = 0;
  for (int i = 0; i < 300; ++i) {
    const Dataset d = random_instance(rng);
    const ScenarioSpec s = random_spec(rng);
    const auto cmp = oracle::compare(d, s);
    CHECK_MESSAGE(cmp.match, cmp.detail);
    if (oracle::evaluate(oracle::from_dataset(d), s).feasible) {
      ++solved;
    } else {
      ++infeasible;
    }
  }
  CHECK(solved >= 100);
  CHECK(infeasible >= 1);
}

TEST_CASE("oracle solves the toy by hand") {
  const auto r = oracle::evaluate(oracle::from_dataset(fixture::toy()), {"t", DesignSpec::ipp(1.0), {10.0, 0.5}, 10.0});
  REQUIRE(r.feasible);
  CHECK(r.base_rate == 5.0);
  CHECK(r.peak_rate == doctest::Approx(11.0).epsilon(1e-12));
}

TEST_CASE("oracle grid on the bundled toys") {
  for (const char* name : {"toy", "toy2"}) {
    const Dataset d = load_dataset(DatasetPaths::in_directory(std::filesystem::path(GRIDTARIFF_DATA_DIR) / name));
    const auto grid = oracle::check_grid(d, 18.25);
    CHECK(grid.size() > 20);
    for (const auto& s : grid) {
      const auto cmp = oracle::compare(d, s);
      CHECK_MESSAGE(cmp.match, cmp.detail);
    }
  }
}

TEST_CASE("oracle agrees on the full-year fixture") {
  const Dataset& d = fixture::synthetic();
  for (const auto& design : {DesignSpec::tou(), DesignSpec::dcpp(0.01), DesignSpec::dcipp(2.0, 0.05)}) {
    const auto cmp = oracle::compare(d, {scenario_name(design), design, {18.25, 0.95}, 18.25});
    CHECK_MESSAGE(cmp.match, cmp.detail);
  }
}
