#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectune/matrix.hpp"

namespace spectune::data {

inline constexpr int kBands = 103;        // absorbance bands, 684-990 nm at 3.3 nm
inline constexpr int kFeatureBlocks = 6;  // raw, d1, d2, snv, snv_d1, snv_d2
inline constexpr int kFeatureCols = kBands * kFeatureBlocks;  // 618

// One fruit measurement.
struct RawSample {
  std::string id;
  std::chrono::year_month_day date;
  std::string season;
  double dm = 0.0;  // percent dry matter (target)
  std::array<double, kBands> spectrum{};

  std::chrono::sys_days day() const { return std::chrono::sys_days(date); }
};

// samples x 618 design matrix; block order fixed: raw | d1 | d2 | snv | snv_d1 | snv_d2.
struct FeatureMatrix {
  Matrix<double> values;  // rows x 618
  std::size_t rows() const { return values.rows; }
  static std::vector<std::string> column_names();
};

// Per-column standardization statistics, fit on the calibration set and
// frozen for validation/test.
struct StandardizeStats {
  std::vector<double> means;  // 618
  std::vector<double> stds;   // 618, strictly positive after degenerate handling
  double target_mean = 0.0;
  double target_std = 1.0;
  std::vector<int> degenerate_columns;  // std fell below 1e-12; replaced by 1
  bool degenerate_target = false;
};

// ---------------------------------------------------------------------------
// Preprocessing primitives

// Savitzky-Golay filter: per-point least-squares polynomial fit of degree
// `polyorder` over a centered window, returning the `deriv`-th derivative
// with unit sample spacing. Edges are handled by fitting the first/last full
// window and evaluating the fitted polynomial at the edge positions, so the
// output has the same length as the input.
std::vector<double> savgol(const std::vector<double>& signal, int window, int polyorder,
                           int deriv);

// Standard Normal Variate: (x - mean) / population std. Throws
// DegenerateError when the population std is below 1e-12.
std::vector<double> snv(const std::vector<double>& spectrum);

FeatureMatrix assemble_features(const std::vector<RawSample>& samples, int sg_window = 13,
                                int sg_polyorder = 2);

struct StandardizeResult {
  FeatureMatrix features;
  std::vector<double> targets;  // standardized
  StandardizeStats stats;
};

// Fits stats when absent (population std over the given rows), otherwise
// applies the given stats unchanged.
StandardizeResult standardize(const FeatureMatrix& m, const std::vector<double>& targets,
                              const std::optional<StandardizeStats>& stats = std::nullopt);

std::vector<double> destandardize_targets(const std::vector<double>& std_targets,
                                          const StandardizeStats& stats);

// ---------------------------------------------------------------------------
// Dataset I/O (canonical CSV: id,date,season,dm,a000..a102)

std::vector<RawSample> load_dataset(const std::string& path);
void save_dataset(const std::vector<RawSample>& samples, const std::string& path);
void save_features_csv(const FeatureMatrix& m, const std::string& path);

// ---------------------------------------------------------------------------
// Synthetic seasonal-drift generator

struct SyntheticSeason {
  std::string label;     // also the calendar year the dates fall in
  int n_samples = 0;
  double drift_offset = 0.0;  // band-position shift applied to all peaks
};

// Fixed constants of the synthetic generator, exposed so tests can recover
// peak heights from exact band values and verify the dm functional.
struct SyntheticModel {
  static constexpr std::array<double, 3> peak_centers{24.0, 51.0, 78.0};
  static constexpr std::array<double, 3> peak_widths{5.5, 8.0, 6.5};
  static constexpr std::array<double, 3> dm_weights{3.2, 2.1, -2.6};
  static constexpr double dm_base = 14.0;
  static constexpr double dm_drift_coeff = 0.6;
  static double dm_functional(const std::array<double, 3>& heights, double drift);
};

// Spectra are sums of 3 Gaussian peaks over the 103-band grid whose centers
// shift by drift_offset per season; dm is a linear functional of the peak
// heights plus a drift contribution plus Gaussian noise. Pure function of its
// arguments.
std::vector<RawSample> generate_synthetic(std::uint64_t seed,
                                          const std::vector<SyntheticSeason>& seasons,
                                          double noise_sd);

// Parses YYYY-MM-DD, throws ArgumentError if not a valid calendar date.
std::chrono::year_month_day parse_date(const std::string& s);
std::string format_date(const std::chrono::year_month_day& d);

}  // namespace spectune::data
