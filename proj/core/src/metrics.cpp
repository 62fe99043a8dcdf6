#include "sleepbench/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sleepbench/errors.hpp"

namespace sleepbench {

ConfusionCounts confusion(const std::vector<int>& predicted, const std::vector<int>& actual) {
  if (predicted.empty() || predicted.size() != actual.size()) {
    throw ContractError("confusion wants equal nonzero lengths, got " +
                        std::to_string(predicted.size()) + " and " + std::to_string(actual.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int p = predicted[i], a = actual[i];
    if ((p != 0 && p != 1) || (a != 0 && a != 1)) {
      throw ContractError("confusion labels must be 0 or 1, got predicted=" + std::to_string(p) +
                          " actual=" + std::to_string(a) + " at row " + std::to_string(i));
    }
    if (p == 1 && a == 1) {
      ++c.tp;
    } else if (p == 0 && a == 0) {
      ++c.tn;
    } else if (p == 1 && a == 0) {
      ++c.fp;
    } else {
      ++c.fn;
    }
  }
  return c;
}

std::string_view metric_name(MetricId id) {
  switch (id) {
    case MetricId::ac: return "AC";
    case MetricId::se: return "SE";
    case MetricId::sp: return "SP";
    case MetricId::pr: return "PR";
    case MetricId::re: return "RE";
    case MetricId::f1: return "F1";
  }
  return "?";
}

double MetricsReport::value(MetricId id) const {
  switch (id) {
    case MetricId::ac: return ac;
    case MetricId::se: return se;
    case MetricId::sp: return sp;
    case MetricId::pr: return pr;
    case MetricId::re: return re;
    case MetricId::f1: return f1;
  }
  return 0;
}

bool MetricsReport::flagged(MetricId id) const {
  return std::find(undefined_flags.begin(), undefined_flags.end(), id) != undefined_flags.end();
}

MetricsReport compute_metrics(const ConfusionCounts& c) {
  if (c.total() == 0) {
    throw ParamError("compute_metrics wants at least one evaluated row");
  }
  MetricsReport r;
  auto ratio = [&r](std::size_t num, std::size_t den, MetricId id) {
    if (den == 0) {
      r.undefined_flags.push_back(id);
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  r.ac = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  r.se = ratio(c.tp, c.tp + c.fn, MetricId::se);
  r.sp = ratio(c.tn, c.tn + c.fp, MetricId::sp);
  r.pr = ratio(c.tp, c.tp + c.fp, MetricId::pr);
  // Recall shares the sensitivity formula; flag it alongside SE.
  r.re = r.se;
  if (c.tp + c.fn == 0) r.undefined_flags.push_back(MetricId::re);
  if (r.pr + r.re == 0) {
    r.undefined_flags.push_back(MetricId::f1);
    r.f1 = 0.0;
  } else {
    r.f1 = 2.0 * r.pr * r.re / (r.pr + r.re);
  }
  std::sort(r.undefined_flags.begin(), r.undefined_flags.end());
  return r;
}

std::string render_percent(double x) {
  if (!std::isfinite(x)) throw ParamError("render_percent wants a finite value");
  // Snap to 1e-9, then round half-up at the hundredth of a percent.
  const long long nano = std::llround(x * 1e9);
  if (nano < 0) throw ParamError("render_percent wants a nonnegative value");
  const long long hundredths = (nano + 50000) / 100000;
  std::string out = std::to_string(hundredths / 100);
  const long long frac = hundredths % 100;
  out += '.';
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  out += '%';
  return out;
}

}  // namespace sleepbench
