#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "spectune/dataset.hpp"
#include "spectune/errors.hpp"
#include "spectune/rng.hpp"
#include "spectune/splits.hpp"

using namespace spectune;
using namespace spectune::splits;
using data::RawSample;

namespace {

RawSample sample_at(const std::string& id, const std::string& season, const std::string& date) {
  RawSample s;
  s.id = id;
  s.season = season;
  s.date = data::parse_date(date);
  s.dm = 15.0;
  s.spectrum.fill(1.0);
  s.spectrum[0] = 2.0;  // keep spectra non-degenerate
  return s;
}

// Fixture with the published per-season sample counts:
// 2015+2016 = 5045, 2017 = 4869, 2018 (test) = 1448; total 11362.
std::vector<RawSample> mango_counts_fixture() {
  std::vector<RawSample> v;
  auto add_season = [&](const std::string& season, int n) {
    for (int i = 0; i < n; ++i) {
      char date[16];
      std::snprintf(date, sizeof date, "%s-%02d-%02d", season.c_str(), 1 + (i / 28) % 12,
                    1 + i % 28);
      v.push_back(sample_at(season + "_" + std::to_string(i), season, date));
    }
  };
  add_season("2015", 2480);
  add_season("2016", 2565);
  add_season("2017", 4869);
  add_season("2018", 1448);
  return v;
}

std::vector<RawSample> small_synthetic() {
  return data::generate_synthetic(5, {{"2015", 30, 0.0}, {"2016", 30, 1.0}, {"2017", 30, 2.0},
                                      {"2018", 20, 3.0}},
                                  0.2);
}

}  // namespace

TEST_CASE("published set sizes: D_rand and D_shift give 6642/3272/1448") {
  const auto samples = mango_counts_fixture();
  for (const Strategy strat : {Strategy::random, Strategy::time_shift}) {
    SplitSpec spec;
    spec.strategy = strat;
    spec.seed = 1;
    const auto a = make_split(samples, spec);
    CHECK(a.count(Label::calibration) == 6642);
    CHECK(a.count(Label::validation) == 3272);
    CHECK(a.count(Label::test) == 1448);
  }
}

TEST_CASE("published set sizes: season 2017 gives 5045/4869") {
  const auto samples = mango_counts_fixture();
  SplitSpec spec;
  spec.strategy = Strategy::season;
  spec.season_label = "2017";
  const auto a = make_split(samples, spec);
  CHECK(a.count(Label::calibration) == 5045);
  CHECK(a.count(Label::validation) == 4869);
  CHECK(a.count(Label::test) == 1448);
  CHECK(a.name == "D_2017");
}

TEST_CASE("every test-season sample is labeled test and nothing else") {
  const auto samples = small_synthetic();
  SplitSpec spec;
  spec.strategy = Strategy::random;
  spec.seed = 3;
  const auto a = make_split(samples, spec);
  for (std::size_t i = 0; i < samples.size(); ++i)
    CHECK((samples[i].season == "2018") == (a.labels[i] == Label::test));
}

TEST_CASE("time_shift takes the chronologically latest ceil(fraction*n)") {
  std::vector<RawSample> samples;
  for (int i = 0; i < 9; ++i)
    samples.push_back(
        sample_at("s" + std::to_string(i), "2015", "2015-01-0" + std::to_string(1 + i % 9)));
  SplitSpec spec;
  spec.strategy = Strategy::time_shift;
  spec.fraction = 1.0 / 3.0;
  spec.test_season = "none";
  const auto a = make_split(samples, spec);
  CHECK(a.count(Label::validation) == 3);  // ceil(9/3)
  // the three latest dates are s6, s7, s8
  for (int i = 6; i < 9; ++i) CHECK(a.labels[i] == Label::validation);
}

TEST_CASE("time_shift boundary: max calibration date <= min validation date") {
  const auto samples = small_synthetic();
  SplitSpec spec;
  spec.strategy = Strategy::time_shift;
  const auto a = make_split(samples, spec);
  std::chrono::sys_days max_cal{std::chrono::days{-1000000}};
  std::chrono::sys_days min_val{std::chrono::days{1000000}};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (a.labels[i] == Label::calibration) max_cal = std::max(max_cal, samples[i].day());
    if (a.labels[i] == Label::validation) min_val = std::min(min_val, samples[i].day());
  }
  CHECK(max_cal <= min_val);
}

TEST_CASE("random split is reproducible per seed and differs across seeds") {
  const auto samples = small_synthetic();
  SplitSpec spec;
  spec.strategy = Strategy::random;
  spec.seed = 11;
  const auto a = make_split(samples, spec);
  const auto b = make_split(samples, spec);
  CHECK(a.labels == b.labels);
  spec.seed = 12;
  const auto c = make_split(samples, spec);
  CHECK(a.labels != c.labels);
}

TEST_CASE("season strategy ignores the seed") {
  const auto samples = small_synthetic();
  SplitSpec spec;
  spec.strategy = Strategy::season;
  spec.season_label = "2017";
  spec.seed = 1;
  const auto a = make_split(samples, spec);
  spec.seed = 999;
  const auto b = make_split(samples, spec);
  CHECK(a.labels == b.labels);
}

TEST_CASE("season strategy defaults to the latest non-test season") {
  const auto samples = small_synthetic();
  SplitSpec spec;
  spec.strategy = Strategy::season;
  const auto a = make_split(samples, spec);
  CHECK(a.name == "D_2017");
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (samples[i].season == "2017") CHECK(a.labels[i] == Label::validation);
}

TEST_CASE("partition invariants hold for 1000 random specs") {
  const auto samples = small_synthetic();
  Rng rng(2024);
  for (int t = 0; t < 1000; ++t) {
    SplitSpec spec;
    const int pick = int(rng.uniform_int(0, 2));
    spec.strategy = pick == 0 ? Strategy::random : pick == 1 ? Strategy::time_shift
                                                             : Strategy::season;
    spec.fraction = rng.uniform(0.05, 0.95);
    spec.seed = rng.next_u64();
    if (spec.strategy == Strategy::season)
      spec.season_label = rng.uniform() < 0.5 ? "2016" : "2017";
    const auto a = make_split(samples, spec);
    // every sample labeled exactly once (vector guarantees that); counts add up
    CHECK(a.count(Label::calibration) + a.count(Label::validation) + a.count(Label::test) ==
          samples.size());
    CHECK(a.count(Label::calibration) > 0);
    CHECK(a.count(Label::validation) > 0);
    for (std::size_t i = 0; i < samples.size(); ++i)
      CHECK((samples[i].season == "2018") == (a.labels[i] == Label::test));
    if (spec.strategy == Strategy::time_shift) {
      std::chrono::sys_days max_cal{std::chrono::days{-1000000}};
      std::chrono::sys_days min_val{std::chrono::days{1000000}};
      for (std::size_t i = 0; i < samples.size(); ++i) {
        if (a.labels[i] == Label::calibration) max_cal = std::max(max_cal, samples[i].day());
        if (a.labels[i] == Label::validation) min_val = std::min(min_val, samples[i].day());
      }
      CHECK(max_cal <= min_val);
    }
  }
}

TEST_CASE("degenerate splits are rejected") {
  std::vector<RawSample> samples = {sample_at("a", "2018", "2018-01-01"),
                                    sample_at("b", "2018", "2018-01-02")};
  SplitSpec spec;
  CHECK_THROWS_AS(make_split(samples, spec), ArgumentError);  // no non-test samples

  samples.push_back(sample_at("c", "2015", "2015-01-01"));
  samples.push_back(sample_at("d", "2015", "2015-01-02"));
  spec.strategy = Strategy::season;
  spec.season_label = "2015";
  // all non-test samples in the validation season -> empty calibration
  CHECK_THROWS_AS(make_split(samples, spec), DegenerateError);

  spec.season_label = "2018";
  CHECK_THROWS_AS(make_split(samples, spec), ArgumentError);  // equals test season

  spec.strategy = Strategy::random;
  spec.fraction = 1.5;
  CHECK_THROWS_AS(make_split(samples, spec), ArgumentError);
}

TEST_CASE("assignment csv export and splitspec json round trip") {
  const auto samples = small_synthetic();
  SplitSpec spec;
  spec.strategy = Strategy::time_shift;
  spec.fraction = 0.25;
  spec.test_season = "2018";
  const auto a = make_split(samples, spec);

  const auto path = std::filesystem::temp_directory_path() / "spectune_assignment.csv";
  save_assignment_csv(samples, a, path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "id,label");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == samples.size());
  std::filesystem::remove(path);

  const auto spec2 = splitspec_from_json(splitspec_json(spec));
  CHECK(spec2.strategy == spec.strategy);
  CHECK(spec2.fraction == spec.fraction);
  CHECK(spec2.test_season == spec.test_season);
}
