#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "sleepbench/dataio.hpp"
#include "sleepbench/errors.hpp"

namespace sleepbench {

namespace {

std::string format_fixed(double v, int decimals) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
  return std::string(buf, ptr);
}

std::string format_clock(long long minutes) {
  const long long m = minutes % 60;
  std::string out = std::to_string(minutes / 60);
  out += ':';
  out += static_cast<char>('0' + m / 10);
  out += static_cast<char>('0' + m % 10);
  return out;
}

enum class Draw { real, whole, yes_no, clock, mood };

// One feature column of a synthetic dataset: how to draw it, the mean/std of
// the drawn encoding (for standardizing the planted score), and its weight in
// the planted signal.
struct FixtureCol {
  const char* name;
  Draw draw;
  double a = 0, b = 0;  // value range; for yes_no, a is P(yes)
  int decimals = 0;
  double weight = 0;

  double mean() const {
    switch (draw) {
      case Draw::real:
      case Draw::whole:
      case Draw::clock: return 0.5 * (a + b);
      case Draw::yes_no: return a;
      case Draw::mood: return 2.0;
    }
    return 0;
  }
  double stddev() const {
    switch (draw) {
      case Draw::real: return (b - a) / std::sqrt(12.0);
      case Draw::whole:
      case Draw::clock: {
        const double span = b - a + 1;
        return std::sqrt((span * span - 1.0) / 12.0);
      }
      case Draw::yes_no: return std::sqrt(a * (1.0 - a));
      case Draw::mood: return std::sqrt(2.0 / 3.0);
    }
    return 1;
  }
  double sample(Rng& rng) const {
    switch (draw) {
      case Draw::real: {
        const double scale = std::pow(10.0, decimals);
        const double v = rng.next_uniform(a, b);
        return static_cast<double>(std::llround(v * scale)) / scale;
      }
      case Draw::whole:
      case Draw::clock:
        return a + static_cast<double>(rng.next_below(static_cast<std::uint64_t>(b - a + 1)));
      case Draw::yes_no: return rng.next_double() < a ? 1.0 : 0.0;
      case Draw::mood: return 1.0 + static_cast<double>(rng.next_below(3));
    }
    return 0;
  }
  std::string format(double v) const {
    switch (draw) {
      case Draw::real: return format_fixed(v, decimals);
      case Draw::whole: return std::to_string(static_cast<long long>(v));
      case Draw::clock: return format_clock(static_cast<long long>(v));
      case Draw::yes_no: return v > 0.5 ? "Yes" : "No";
      case Draw::mood: return v < 1.5 ? ":(" : (v < 2.5 ? ":|" : ":)");
    }
    return "";
  }
};

std::vector<FixtureCol> fixture_columns(DatasetId id) {
  switch (id) {
    case DatasetId::sleep_study:
      return {
          {"Hours", Draw::real, 4.0, 10.0, 2, +1.0},
          {"PhoneReach", Draw::yes_no, 0.5, 0, 0, -0.25},
          {"PhoneTime", Draw::yes_no, 0.5, 0, 0, -0.60},
          {"Tired", Draw::whole, 1, 5, 0, -0.80},
          {"Breakfast", Draw::yes_no, 0.5, 0, 0, +0.40},
      };
    case DatasetId::sleep_deprivation:
      return {
          {"Age Group", Draw::whole, 1, 6, 0, +0.20},
          {"Anxiety Rate", Draw::whole, 1, 5, 0, -1.30},
          {"Depression Rate", Draw::whole, 1, 5, 0, -0.50},
          {"Panic", Draw::yes_no, 0.3, 0, 0, -0.35},
          {"Worry", Draw::whole, 1, 5, 0, -0.45},
          {"Health Problems", Draw::yes_no, 0.4, 0, 0, -0.35},
          {"Nap Duration", Draw::real, 0.0, 90.0, 1, +0.80},
      };
    case DatasetId::sleep_cycle:
      return {
          {"Start", Draw::clock, 1260, 1439, 0, -0.25},
          {"End", Draw::clock, 330, 570, 0, +0.25},
          {"Time In Bed", Draw::clock, 330, 600, 0, +1.20},
          {"Wake Up", Draw::mood, 0, 0, 0, +0.45},
          {"Heart Rate", Draw::real, 48.0, 92.0, 1, -0.50},
          {"Activity (Steps)", Draw::whole, 1000, 15000, 0, +0.40},
      };
  }
  throw ParamError("unknown dataset id");
}

}  // namespace

std::string make_fixture(DatasetId id, std::size_t n, Rng& rng, const FixtureOptions& opts) {
  if (n < 10) throw ParamError("fixture needs n >= 10, got " + std::to_string(n));
  if (opts.noise < 0 || !std::isfinite(opts.noise)) {
    throw ParamError("fixture noise must be finite and >= 0");
  }

  std::vector<FixtureCol> cols = fixture_columns(id);
  double norm = 0;
  for (const FixtureCol& c : cols) norm += c.weight * c.weight;
  norm = std::sqrt(norm);

  const std::vector<ColumnSchema>& schema = schema_for(id);
  ColumnKind target_kind = ColumnKind::yes_no;
  for (const ColumnSchema& c : schema) {
    if (c.role == ColumnRole::target) target_kind = c.kind;
  }

  auto score_of = [&](const std::vector<double>& values) {
    double s = 0;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      s += (cols[j].weight / norm) * (values[j] - cols[j].mean()) / cols[j].stddev();
    }
    return s;
  };

  // With zero noise the planted classes alternate by row and each row is
  // resampled until its score clears a margin, so the fixture is separable;
  // with noise the labels come from thresholding score+noise at its median.
  constexpr double kMargin = 0.7;
  std::vector<std::vector<double>> values(n);
  std::vector<double> noisy_score(n);
  std::vector<int> labels(n);

  for (std::size_t i = 0; i < n; ++i) {
    values[i].resize(cols.size());
    if (opts.noise == 0) {
      const int planted = static_cast<int>(i % 2);
      double s = 0;
      for (int attempt = 0;; ++attempt) {
        if (attempt > 1000000) throw DataError("fixture margin sampling failed to converge");
        for (std::size_t j = 0; j < cols.size(); ++j) values[i][j] = cols[j].sample(rng);
        s = score_of(values[i]);
        if (planted == 1 ? s >= kMargin : s <= -kMargin) break;
      }
      labels[i] = planted;
      noisy_score[i] = s;
    } else {
      for (std::size_t j = 0; j < cols.size(); ++j) values[i][j] = cols[j].sample(rng);
      noisy_score[i] = score_of(values[i]) + opts.noise * rng.next_gaussian();
    }
  }
  if (opts.noise > 0) {
    std::vector<double> sorted(noisy_score);
    std::sort(sorted.begin(), sorted.end());
    const double median =
        (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    for (std::size_t i = 0; i < n; ++i) labels[i] = noisy_score[i] > median ? 1 : 0;
  }

  std::string csv;
  for (std::size_t s = 0; s < schema.size(); ++s) {
    if (s) csv += ',';
    csv += schema[s].name;
  }
  csv += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t feature_j = 0;
    for (std::size_t s = 0; s < schema.size(); ++s) {
      if (s) csv += ',';
      switch (schema[s].role) {
        case ColumnRole::feature:
          csv += cols[feature_j].format(values[i][feature_j]);
          ++feature_j;
          break;
        case ColumnRole::target:
          if (target_kind == ColumnKind::yes_no) {
            csv += labels[i] ? "Yes" : "No";
          } else {
            csv += format_fixed(50.0 + 18.0 * std::tanh(0.9 * noisy_score[i]), 4);
            csv += '%';
          }
          break;
        case ColumnRole::excluded:
          break;  // left empty
      }
    }
    csv += '\n';
  }
  return csv;
}

}  // namespace sleepbench
