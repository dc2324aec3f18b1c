#include "spectune/splits.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <json.hpp>

#include "spectune/errors.hpp"
#include "spectune/rng.hpp"

namespace spectune::splits {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::random:
      return "random";
    case Strategy::time_shift:
      return "time_shift";
    case Strategy::season:
      return "season";
  }
  return "?";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "random") return Strategy::random;
  if (s == "time_shift") return Strategy::time_shift;
  if (s == "season") return Strategy::season;
  throw ArgumentError("unknown split strategy '" + s + "'");
}

const char* label_name(Label l) {
  switch (l) {
    case Label::calibration:
      return "calibration";
    case Label::validation:
      return "validation";
    case Label::test:
      return "test";
  }
  return "?";
}

std::string SplitSpec::default_name() const {
  switch (strategy) {
    case Strategy::random:
      return "D_rand";
    case Strategy::time_shift:
      return "D_shift";
    case Strategy::season:
      return season_label.empty() ? "D_season" : "D_" + season_label;
  }
  return "D_custom";
}

std::size_t SplitAssignment::count(Label l) const {
  return std::count(labels.begin(), labels.end(), l);
}

namespace {

// Latest season among non-test samples, by maximum sample date.
std::string latest_season(const std::vector<data::RawSample>& samples,
                          const std::string& test_season) {
  std::string best;
  std::chrono::sys_days best_day{};
  for (const auto& s : samples) {
    if (s.season == test_season) continue;
    if (best.empty() || s.day() > best_day) {
      best = s.season;
      best_day = s.day();
    }
  }
  return best;
}

}  // namespace

SplitAssignment make_split(const std::vector<data::RawSample>& samples, const SplitSpec& spec) {
  if (spec.strategy != Strategy::season &&
      (!(spec.fraction > 0.0) || !(spec.fraction < 1.0)))
    throw ArgumentError("split fraction must be in (0,1)");

  SplitAssignment out;
  out.labels.assign(samples.size(), Label::calibration);

  std::vector<std::size_t> non_test;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].season == spec.test_season)
      out.labels[i] = Label::test;
    else
      non_test.push_back(i);
  }
  if (non_test.size() < 2) throw ArgumentError("need at least 2 non-test samples to split");

  switch (spec.strategy) {
    case Strategy::random: {
      const std::size_t n_val =
          static_cast<std::size_t>(std::ceil(spec.fraction * double(non_test.size())));
      std::vector<std::size_t> pool = non_test;
      Rng rng(derive_seed(spec.seed, 0x5117));
      // partial Fisher-Yates: the first n_val slots become the validation set
      for (std::size_t i = 0; i < n_val && i < pool.size(); ++i) {
        const std::size_t j = i + std::size_t(rng.uniform_int(0, std::int64_t(pool.size() - i - 1)));
        std::swap(pool[i], pool[j]);
      }
      for (std::size_t i = 0; i < n_val; ++i) out.labels[pool[i]] = Label::validation;
      break;
    }
    case Strategy::time_shift: {
      std::vector<std::size_t> sorted = non_test;
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        const auto da = samples[a].day(), db = samples[b].day();
        if (da != db) return da < db;
        return samples[a].id < samples[b].id;
      });
      const std::size_t n_val =
          static_cast<std::size_t>(std::ceil(spec.fraction * double(sorted.size())));
      for (std::size_t i = sorted.size() - n_val; i < sorted.size(); ++i)
        out.labels[sorted[i]] = Label::validation;
      break;
    }
    case Strategy::season: {
      std::string label = spec.season_label;
      if (label.empty()) label = latest_season(samples, spec.test_season);
      if (label == spec.test_season)
        throw ArgumentError("validation season must differ from the test season");
      bool found = false;
      for (const std::size_t i : non_test)
        if (samples[i].season == label) {
          out.labels[i] = Label::validation;
          found = true;
        }
      if (!found)
        throw ArgumentError("season '" + label + "' not present among non-test samples");
      break;
    }
  }

  out.name = spec.strategy == Strategy::season && spec.season_label.empty()
                 ? "D_" + latest_season(samples, spec.test_season)
                 : spec.default_name();

  if (out.count(Label::calibration) == 0)
    throw DegenerateError("split produced an empty calibration set");
  if (out.count(Label::validation) == 0)
    throw DegenerateError("split produced an empty validation set");
  return out;
}

void save_assignment_csv(const std::vector<data::RawSample>& samples, const SplitAssignment& a,
                         const std::string& path) {
  if (samples.size() != a.labels.size())
    throw ArgumentError("assignment/sample count mismatch");
  std::ofstream out(path);
  if (!out) throw Error("cannot write assignment file: " + path);
  out << "id,label\n";
  for (std::size_t i = 0; i < samples.size(); ++i)
    out << samples[i].id << ',' << label_name(a.labels[i]) << '\n';
  if (!out) throw Error("write failed: " + path);
}

std::string splitspec_json(const SplitSpec& spec) {
  nlohmann::json j;
  j["strategy"] = strategy_name(spec.strategy);
  j["fraction"] = spec.fraction;
  j["season_label"] = spec.season_label;
  j["seed"] = spec.seed;
  j["test_season"] = spec.test_season;
  return j.dump(2);
}

SplitSpec splitspec_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SplitSpec spec;
  spec.strategy = parse_strategy(j.at("strategy").get<std::string>());
  if (j.contains("fraction")) spec.fraction = j["fraction"].get<double>();
  if (j.contains("season_label")) spec.season_label = j["season_label"].get<std::string>();
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("test_season")) spec.test_season = j["test_season"].get<std::string>();
  return spec;
}

}  // namespace spectune::splits
