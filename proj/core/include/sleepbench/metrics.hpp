#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sleepbench {

/// Tallies for one binary evaluation; class 1 is "positive".
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
};

ConfusionCounts confusion(const std::vector<int>& predicted, const std::vector<int>& actual);

enum class MetricId { ac = 0, se, sp, pr, re, f1 };
inline constexpr std::size_t kMetricCount = 6;
inline constexpr std::array<MetricId, kMetricCount> kAllMetrics = {
    MetricId::ac, MetricId::se, MetricId::sp, MetricId::pr, MetricId::re, MetricId::f1};

std::string_view metric_name(MetricId id);  // "AC", "SE", ...

/// The six evaluation metrics, all in [0, 1]. A metric whose denominator was
/// 0/0 is reported as 0 and listed in undefined_flags so reports can mark it.
struct MetricsReport {
  double ac = 0, se = 0, sp = 0, pr = 0, re = 0, f1 = 0;
  std::vector<MetricId> undefined_flags;

  double value(MetricId id) const;
  bool flagged(MetricId id) const;
};

MetricsReport compute_metrics(const ConfusionCounts& counts);

/// Renders a fraction as a percentage with two decimals, rounding half-up at
/// the third decimal: 0.634615 -> "63.46%", 0.59035 -> "59.04%". Values are
/// snapped to 1e-9 first so decimal inputs round the intuitive way.
std::string render_percent(double x);

}  // namespace sleepbench
