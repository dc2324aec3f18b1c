#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectune/dataset.hpp"

namespace spectune::splits {

enum class Strategy { random, time_shift, season };
enum class Label { calibration, validation, test };

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& s);
const char* label_name(Label l);

// How to partition non-test samples; the test set is always the fixed
// test_season. The 0.33 default reproduces the published set sizes
// (6642/3272 calibration/validation from 9914 non-test samples).
struct SplitSpec {
  Strategy strategy = Strategy::random;
  double fraction = 0.33;          // random/time_shift validation share
  std::string season_label;        // season strategy; empty = latest non-test season
  std::uint64_t seed = 0;          // random strategy only
  std::string test_season = "2018";

  std::string default_name() const;  // D_rand / D_shift / D_<season>
};

struct SplitAssignment {
  std::string name;
  std::vector<Label> labels;  // aligned with the sample collection
  std::size_t count(Label l) const;
};

// Partitions samples according to spec. Throws DegenerateError when either
// the calibration or validation side comes out empty.
SplitAssignment make_split(const std::vector<data::RawSample>& samples, const SplitSpec& spec);

void save_assignment_csv(const std::vector<data::RawSample>& samples, const SplitAssignment& a,
                         const std::string& path);
std::string splitspec_json(const SplitSpec& spec);
SplitSpec splitspec_from_json(const std::string& text);

}  // namespace spectune::splits
