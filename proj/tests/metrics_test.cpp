#include <gtest/gtest.h>

#include "sleepbench/errors.hpp"
#include "sleepbench/metrics.hpp"
#include "sleepbench/rng.hpp"

using namespace sleepbench;

TEST(Confusion, PerfectPrediction) {
  const ConfusionCounts c = confusion({1, 0, 1}, {1, 0, 1});
  EXPECT_EQ(c.tp, 2u);
  EXPECT_EQ(c.tn, 1u);
  EXPECT_EQ(c.fp, 0u);
  EXPECT_EQ(c.fn, 0u);
}

TEST(Confusion, DirectCount) {
  const ConfusionCounts c = confusion({1, 1, 0, 0}, {1, 0, 1, 0});
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.tn, 1u);
}

TEST(Confusion, MatchesCountingOracle) {
  Rng rng(11);
  std::vector<int> pred(200), actual(200);
  for (std::size_t i = 0; i < 200; ++i) {
    pred[i] = rng.next_double() < 0.5;
    actual[i] = rng.next_double() < 0.5;
  }
  const ConfusionCounts c = confusion(pred, actual);
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    tp += pred[i] == 1 && actual[i] == 1;
    tn += pred[i] == 0 && actual[i] == 0;
    fp += pred[i] == 1 && actual[i] == 0;
    fn += pred[i] == 0 && actual[i] == 1;
  }
  EXPECT_EQ(c.tp, tp);
  EXPECT_EQ(c.tn, tn);
  EXPECT_EQ(c.fp, fp);
  EXPECT_EQ(c.fn, fn);
  EXPECT_EQ(c.total(), 200u);
}

TEST(Confusion, RejectsBadInput) {
  EXPECT_THROW(confusion({}, {}), ContractError);
  EXPECT_THROW(confusion({1, 0}, {1}), ContractError);
  EXPECT_THROW(confusion({2, 0}, {1, 0}), ContractError);
  EXPECT_THROW(confusion({1, 0}, {1, -1}), ContractError);
}

TEST(ComputeMetrics, DirectSubstitution) {
  const MetricsReport r = compute_metrics({3, 2, 1, 2});
  EXPECT_DOUBLE_EQ(r.se, 0.6);
  EXPECT_DOUBLE_EQ(r.sp, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.ac, 5.0 / 8.0);
  EXPECT_DOUBLE_EQ(r.pr, 0.75);
  EXPECT_DOUBLE_EQ(r.re, 0.6);
  EXPECT_DOUBLE_EQ(r.f1, 2.0 * (0.75 * 0.6) / 1.35);
  EXPECT_NEAR(r.f1, 2.0 / 3.0, 1e-12);
  EXPECT_TRUE(r.undefined_flags.empty());
}

// The harmonic mean of the reference PR/RE pair for the largest dataset lands
// on its reported F1 within rounding.
TEST(ComputeMetrics, ReferenceF1FromPrRe) {
  const double pr = 0.6667, re = 0.5297;
  const double f1 = 2 * pr * re / (pr + re);
  EXPECT_NEAR(f1, 0.5903, 5e-4);
  EXPECT_EQ(render_percent(f1), "59.04%");
}

TEST(ComputeMetrics, ZeroOverZeroConvention) {
  const MetricsReport r = compute_metrics({0, 3, 0, 2});  // tp=0, fp=0 -> PR undefined
  EXPECT_EQ(r.pr, 0.0);
  EXPECT_TRUE(r.flagged(MetricId::pr));
  EXPECT_TRUE(r.flagged(MetricId::f1));
  EXPECT_FALSE(r.flagged(MetricId::se));
  EXPECT_EQ(r.f1, 0.0);
}

TEST(ComputeMetrics, SensitivityEqualsRecallAlways) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const ConfusionCounts c{rng.next_below(10), rng.next_below(10), rng.next_below(10),
                            rng.next_below(10)};
    if (c.total() == 0) continue;
    const MetricsReport r = compute_metrics(c);
    EXPECT_EQ(r.se, r.re);
    EXPECT_DOUBLE_EQ(r.ac, static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total()));
    for (MetricId id : kAllMetrics) {
      EXPECT_GE(r.value(id), 0.0);
      EXPECT_LE(r.value(id), 1.0);
    }
  }
}

TEST(ComputeMetrics, RejectsEmptyCounts) {
  EXPECT_THROW(compute_metrics({0, 0, 0, 0}), ParamError);
}

// Relabeling 0<->1 in both vectors swaps SE with SP and PR with the
// negative-class precision.
TEST(ComputeMetrics, ClassSwapSymmetry) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> pred(40), actual(40);
    for (std::size_t i = 0; i < 40; ++i) {
      pred[i] = rng.next_double() < 0.5;
      actual[i] = rng.next_double() < 0.5;
    }
    std::vector<int> pred_sw(40), actual_sw(40);
    for (std::size_t i = 0; i < 40; ++i) {
      pred_sw[i] = 1 - pred[i];
      actual_sw[i] = 1 - actual[i];
    }
    const ConfusionCounts c = confusion(pred, actual);
    const ConfusionCounts cs = confusion(pred_sw, actual_sw);
    EXPECT_EQ(cs.tp, c.tn);
    EXPECT_EQ(cs.fp, c.fn);
    const MetricsReport r = compute_metrics(c);
    const MetricsReport rs = compute_metrics(cs);
    if ((c.tp + c.fn) > 0 && (c.tn + c.fp) > 0) {
      EXPECT_DOUBLE_EQ(rs.se, r.sp);
      EXPECT_DOUBLE_EQ(rs.sp, r.se);
    }
    if (cs.tp + cs.fp > 0) {
      const double neg_precision =
          static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fn);
      EXPECT_DOUBLE_EQ(rs.pr, neg_precision);
    }
    EXPECT_DOUBLE_EQ(rs.ac, r.ac);
  }
}

// Exhaustive cross-check against an independent evaluation path for all small
// count combinations (the acceptance suite pushes this to n <= 30).
TEST(ComputeMetrics, ExhaustiveSmallOracle) {
  for (std::size_t n = 1; n <= 12; ++n) {
    for (std::size_t tp = 0; tp <= n; ++tp) {
      for (std::size_t tn = 0; tp + tn <= n; ++tn) {
        for (std::size_t fp = 0; tp + tn + fp <= n; ++fp) {
          const std::size_t fn = n - tp - tn - fp;
          const MetricsReport r = compute_metrics({tp, tn, fp, fn});
          auto safe = [](double num, double den) { return den == 0 ? 0.0 : num / den; };
          const double se = safe(double(tp), double(tp + fn));
          const double sp = safe(double(tn), double(tn + fp));
          const double acc = double(tp + tn) / double(n);
          const double pr = safe(double(tp), double(tp + fp));
          const double re = se;
          const double f1 = safe(2 * pr * re, pr + re);
          EXPECT_NEAR(r.se, se, 1e-12);
          EXPECT_NEAR(r.sp, sp, 1e-12);
          EXPECT_NEAR(r.ac, acc, 1e-12);
          EXPECT_NEAR(r.pr, pr, 1e-12);
          EXPECT_NEAR(r.re, re, 1e-12);
          EXPECT_NEAR(r.f1, f1, 1e-12);
        }
      }
    }
  }
}

TEST(RenderPercent, ReferenceValues) {
  EXPECT_EQ(render_percent(0.6346153846), "63.46%");
  EXPECT_EQ(render_percent(1.0), "100.00%");
  EXPECT_EQ(render_percent(0.59035), "59.04%");  // half-up at the third decimal
  EXPECT_EQ(render_percent(0.0), "0.00%");
  EXPECT_EQ(render_percent(0.005), "0.50%");
  EXPECT_EQ(render_percent(0.12005), "12.01%");
}

TEST(RenderPercent, RejectsNonFinite) {
  EXPECT_THROW(render_percent(std::numeric_limits<double>::quiet_NaN()), ParamError);
  EXPECT_THROW(render_percent(-0.25), ParamError);
}
