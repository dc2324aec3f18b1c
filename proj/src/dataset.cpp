#include "spectune/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spectune/errors.hpp"
#include "spectune/rng.hpp"

namespace spectune::data {

namespace {

constexpr double kDegenerateStd = 1e-12;

// Solves the small dense system M x = b in place (partial pivoting).
std::vector<double> solve_dense(std::vector<double> M, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(M[r * n + col]) > std::abs(M[piv * n + col])) piv = r;
    if (std::abs(M[piv * n + col]) < 1e-300)
      throw ArgumentError("singular matrix in polynomial fit");
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(M[col * n + c], M[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    const double inv = 1.0 / M[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = M[r * n + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) M[r * n + c] -= f * M[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ri = n; ri-- > 0;) {
    double acc = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) acc -= M[ri * n + c] * x[c];
    x[ri] = acc / M[ri * n + ri];
  }
  return x;
}

// Coefficient row of the SG filter for evaluation offset t (relative to the
// window center): out = sum_j row[j] * window[j] equals the deriv-th
// derivative of the fitted polynomial at t.
std::vector<double> sg_coeff_row(int window, int polyorder, int deriv, double t) {
  const int np = polyorder + 1;
  const int h = (window - 1) / 2;
  // Vandermonde A[j][k] = (j - h)^k
  std::vector<double> A(static_cast<std::size_t>(window) * np);
  for (int j = 0; j < window; ++j) {
    double p = 1.0;
    for (int k = 0; k < np; ++k) {
      A[j * np + k] = p;
      p *= double(j - h);
    }
  }
  // Normal matrix M = A^T A
  std::vector<double> M(static_cast<std::size_t>(np) * np, 0.0);
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < np; ++b) {
      double acc = 0;
      for (int j = 0; j < window; ++j) acc += A[j * np + a] * A[j * np + b];
      M[a * np + b] = acc;
    }
  // d-th derivative evaluation vector at offset t: dvec[k] = k!/(k-d)! t^(k-d)
  std::vector<double> dvec(np, 0.0);
  for (int k = deriv; k < np; ++k) {
    double f = 1.0;
    for (int i = 0; i < deriv; ++i) f *= double(k - i);
    dvec[k] = f * std::pow(t, double(k - deriv));
  }
  const std::vector<double> z = solve_dense(std::move(M), std::move(dvec));
  std::vector<double> row(window);
  for (int j = 0; j < window; ++j) {
    double acc = 0;
    for (int k = 0; k < np; ++k) acc += A[j * np + k] * z[k];
    row[j] = acc;
  }
  return row;
}

double apply_row(const std::vector<double>& row, const double* window) {
  double acc = 0;
  for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * window[j];
  return acc;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double_field(const std::string& s, const char* what, std::size_t row) {
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last)
    throw DataError(std::string("cannot parse ") + what + " value '" + s + "'", row);
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> canonical_header() {
  std::vector<std::string> h = {"id", "date", "season", "dm"};
  for (int b = 0; b < kBands; ++b) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "a%03d", b);
    h.emplace_back(buf);
  }
  return h;
}

}  // namespace

std::chrono::year_month_day parse_date(const std::string& s) {
  int y = 0, m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
      std::from_chars(s.data(), s.data() + 4, y).ec != std::errc() ||
      std::from_chars(s.data() + 5, s.data() + 7, m).ec != std::errc() ||
      std::from_chars(s.data() + 8, s.data() + 10, d).ec != std::errc())
    throw ArgumentError("date must be YYYY-MM-DD, got '" + s + "'");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw ArgumentError("invalid calendar date '" + s + "'");
  return ymd;
}

std::string format_date(const std::chrono::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                unsigned(d.day()));
  return buf;
}

std::vector<std::string> FeatureMatrix::column_names() {
  static const char* prefixes[kFeatureBlocks] = {"raw", "d1", "d2", "snv", "snv_d1", "snv_d2"};
  std::vector<std::string> names;
  names.reserve(kFeatureCols);
  for (const char* p : prefixes)
    for (int b = 0; b < kBands; ++b) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%s_%03d", p, b);
      names.emplace_back(buf);
    }
  return names;
}

std::vector<double> savgol(const std::vector<double>& signal, int window, int polyorder,
                           int deriv) {
  if (window < 1 || window % 2 == 0) throw ArgumentError("savgol window must be odd and positive");
  if (polyorder >= window) throw ArgumentError("savgol window must exceed polyorder");
  if (deriv < 0 || deriv > polyorder)
    throw ArgumentError("savgol deriv must be in [0, polyorder]");
  const int n = static_cast<int>(signal.size());
  if (n < window) throw ArgumentError("savgol signal shorter than window");

  const int h = (window - 1) / 2;
  const std::vector<double> center_row = sg_coeff_row(window, polyorder, deriv, 0.0);

  std::vector<double> out(signal.size());
  for (int i = h; i < n - h; ++i) out[i] = apply_row(center_row, signal.data() + i - h);
  // Edges: evaluate the polynomial fitted to the first/last full window.
  for (int i = 0; i < h; ++i) {
    const auto row = sg_coeff_row(window, polyorder, deriv, double(i - h));
    out[i] = apply_row(row, signal.data());
  }
  for (int i = std::max(n - h, h); i < n; ++i) {
    const auto row = sg_coeff_row(window, polyorder, deriv, double(i - (n - 1 - h)));
    out[i] = apply_row(row, signal.data() + n - window);
  }
  return out;
}

std::vector<double> snv(const std::vector<double>& spectrum) {
  if (spectrum.size() < 2) throw ArgumentError("snv needs at least 2 points");
  double mean = 0;
  for (const double v : spectrum) mean += v;
  mean /= double(spectrum.size());
  double var = 0;
  for (const double v : spectrum) var += (v - mean) * (v - mean);
  var /= double(spectrum.size());
  const double sd = std::sqrt(var);
  if (sd < kDegenerateStd)
    throw DegenerateError("flat spectrum: population std below 1e-12, SNV undefined");
  std::vector<double> out(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) out[i] = (spectrum[i] - mean) / sd;
  return out;
}

FeatureMatrix assemble_features(const std::vector<RawSample>& samples, int sg_window,
                                int sg_polyorder) {
  FeatureMatrix fm;
  fm.values.resize(samples.size(), kFeatureCols);
  std::vector<double> raw(kBands);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::copy(samples[s].spectrum.begin(), samples[s].spectrum.end(), raw.begin());
    std::vector<double> blocks[kFeatureBlocks];
    blocks[0] = raw;
    blocks[1] = savgol(raw, sg_window, sg_polyorder, 1);
    blocks[2] = savgol(raw, sg_window, sg_polyorder, 2);
    try {
      blocks[3] = snv(raw);
    } catch (const DegenerateError& e) {
      throw DegenerateError(std::string(e.what()) + " (sample " + samples[s].id + ")");
    }
    blocks[4] = savgol(blocks[3], sg_window, sg_polyorder, 1);
    blocks[5] = savgol(blocks[3], sg_window, sg_polyorder, 2);
    double* row = fm.values.row(s);
    for (int b = 0; b < kFeatureBlocks; ++b)
      std::copy(blocks[b].begin(), blocks[b].end(), row + b * kBands);
  }
  return fm;
}

StandardizeResult standardize(const FeatureMatrix& m, const std::vector<double>& targets,
                              const std::optional<StandardizeStats>& given) {
  const std::size_t rows = m.rows();
  if (targets.size() != rows) throw ArgumentError("targets/features row count mismatch");

  StandardizeStats stats;
  if (given) {
    if (given->means.size() != kFeatureCols || given->stds.size() != kFeatureCols)
      throw ArgumentError("standardize stats length mismatch");
    stats = *given;
  } else {
    if (rows < 2) throw ArgumentError("standardize needs at least 2 rows to fit");
    stats.means.assign(kFeatureCols, 0.0);
    stats.stds.assign(kFeatureCols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* row = m.values.row(r);
      for (int c = 0; c < kFeatureCols; ++c) stats.means[c] += row[c];
    }
    for (int c = 0; c < kFeatureCols; ++c) stats.means[c] /= double(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* row = m.values.row(r);
      for (int c = 0; c < kFeatureCols; ++c) {
        const double d = row[c] - stats.means[c];
        stats.stds[c] += d * d;
      }
    }
    for (int c = 0; c < kFeatureCols; ++c) {
      stats.stds[c] = std::sqrt(stats.stds[c] / double(rows));
      if (stats.stds[c] < kDegenerateStd) {
        stats.stds[c] = 1.0;
        stats.degenerate_columns.push_back(c);
      }
    }
    double tm = 0;
    for (const double t : targets) tm += t;
    tm /= double(rows);
    double tv = 0;
    for (const double t : targets) tv += (t - tm) * (t - tm);
    stats.target_mean = tm;
    stats.target_std = std::sqrt(tv / double(rows));
    if (stats.target_std < kDegenerateStd) {
      stats.target_std = 1.0;
      stats.degenerate_target = true;
    }
  }

  StandardizeResult out;
  out.features.values.resize(rows, kFeatureCols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = m.values.row(r);
    double* dst = out.features.values.row(r);
    for (int c = 0; c < kFeatureCols; ++c) dst[c] = (src[c] - stats.means[c]) / stats.stds[c];
  }
  out.targets.resize(rows);
  for (std::size_t r = 0; r < rows; ++r)
    out.targets[r] = (targets[r] - stats.target_mean) / stats.target_std;
  out.stats = std::move(stats);
  return out;
}

std::vector<double> destandardize_targets(const std::vector<double>& std_targets,
                                          const StandardizeStats& stats) {
  std::vector<double> out(std_targets.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std_targets[i] * stats.target_std + stats.target_mean;
  return out;
}

std::vector<RawSample> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty dataset file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto expected = canonical_header();
  const auto header = split_csv_line(line);
  for (std::size_t i = 0; i < std::min(header.size(), expected.size()); ++i)
    if (header[i] != expected[i])
      throw SchemaError("header mismatch at column '" + header[i] + "' (expected '" +
                        expected[i] + "')");
  if (header.size() < expected.size())
    throw SchemaError("missing column '" + expected[header.size()] + "'");
  if (header.size() > expected.size())
    throw SchemaError("unexpected extra column '" + header[expected.size()] + "'");

  std::vector<RawSample> samples;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != expected.size())
      throw DataError("expected " + std::to_string(expected.size()) + " columns, found " +
                          std::to_string(fields.size()),
                      row_no);
    RawSample s;
    s.id = fields[0];
    try {
      s.date = parse_date(fields[1]);
    } catch (const ArgumentError& e) {
      throw DataError(e.what(), row_no);
    }
    s.season = fields[2];
    if (s.season.empty()) throw DataError("empty season label", row_no);
    s.dm = parse_double_field(fields[3], "dm", row_no);
    if (!std::isfinite(s.dm)) throw DataError("non-finite dm", row_no);
    for (int b = 0; b < kBands; ++b)
      s.spectrum[b] = parse_double_field(fields[4 + b], "spectrum", row_no);
    samples.push_back(std::move(s));
  }
  return samples;
}

void save_dataset(const std::vector<RawSample>& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write dataset file: " + path);
  const auto header = canonical_header();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& s : samples) {
    out << s.id << ',' << format_date(s.date) << ',' << s.season << ',' << fmt_double(s.dm);
    for (int b = 0; b < kBands; ++b) out << ',' << fmt_double(s.spectrum[b]);
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

void save_features_csv(const FeatureMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write features file: " + path);
  const auto names = FeatureMatrix::column_names();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.values.row(r);
    for (int c = 0; c < kFeatureCols; ++c) out << (c ? "," : "") << fmt_double(row[c]);
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

double SyntheticModel::dm_functional(const std::array<double, 3>& heights, double drift) {
  double dm = dm_base + dm_drift_coeff * drift;
  for (int p = 0; p < 3; ++p) dm += dm_weights[p] * heights[p];
  return dm;
}

std::vector<RawSample> generate_synthetic(std::uint64_t seed,
                                          const std::vector<SyntheticSeason>& seasons,
                                          double noise_sd) {
  for (const auto& s : seasons)
    if (s.n_samples < 1) throw ArgumentError("synthetic season needs n_samples >= 1");

  Rng rng(derive_seed(seed, 0x5f3759df));
  std::vector<RawSample> samples;
  for (const auto& season : seasons) {
    int year = 0;
    if (std::from_chars(season.label.data(), season.label.data() + season.label.size(), year)
            .ec != std::errc())
      throw ArgumentError("synthetic season label must be a year, got '" + season.label + "'");
    for (int i = 0; i < season.n_samples; ++i) {
      RawSample s;
      char idbuf[32];
      std::snprintf(idbuf, sizeof idbuf, "S%s-%05d", season.label.c_str(), i);
      s.id = idbuf;
      s.season = season.label;
      const int doy = static_cast<int>(rng.uniform_int(0, 364));
      s.date = std::chrono::year_month_day(
          std::chrono::sys_days(std::chrono::year{year} / 1 / 1) + std::chrono::days{doy});
      std::array<double, 3> h;
      for (auto& v : h) v = rng.uniform(0.5, 1.5);
      for (int b = 0; b < kBands; ++b) {
        double v = 0;
        for (int p = 0; p < 3; ++p) {
          const double c = SyntheticModel::peak_centers[p] + season.drift_offset;
          const double w = SyntheticModel::peak_widths[p];
          const double d = (double(b) - c) / w;
          v += h[p] * std::exp(-0.5 * d * d);
        }
        s.spectrum[b] = v;
      }
      s.dm = SyntheticModel::dm_functional(h, season.drift_offset) + noise_sd * rng.normal();
      samples.push_back(std::move(s));
    }
  }
  return samples;
}

}  // namespace spectune::data
