#include "sleepbench/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sleepbench/errors.hpp"

namespace sleepbench {

namespace {

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.id = data.id;
  out.schema = data.schema;
  out.features = NumArray::zeros({rows.size(), data.dim()});
  out.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < data.dim(); ++j) out.features.at(i, j) = data.features.at(rows[i], j);
    out.labels[i] = data.labels[rows[i]];
  }
  return out;
}

bool two_class(const std::vector<int>& labels, std::size_t begin, std::size_t end,
               const std::vector<std::size_t>& order) {
  bool any0 = false, any1 = false;
  for (std::size_t i = begin; i < end; ++i) (labels[order[i]] ? any1 : any0) = true;
  return any0 && any1;
}

}  // namespace

std::string_view to_string(NormKind kind) {
  return kind == NormKind::zscore ? "zscore" : "minmax";
}

NormKind norm_kind_from(std::string_view name) {
  if (name == "zscore") return NormKind::zscore;
  if (name == "minmax") return NormKind::minmax;
  throw ParamError("unknown normalization '" + std::string(name) + "' (want zscore or minmax)");
}

TrainTestSplit split_50_50(const Dataset& data, Rng& rng) {
  const std::size_t n = data.n();
  if (n < 4) throw DataError("50-50 split needs at least 4 rows, got " + std::to_string(n));
  const std::size_t n_train = (n + 1) / 2;

  std::vector<std::size_t> order(n);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = rng.next_below(i + 1);
      std::swap(order[i], order[j]);
    }
    if (two_class(data.labels, 0, n_train, order) && two_class(data.labels, n_train, n, order)) {
      TrainTestSplit split;
      split.train = take_rows(data, {order.begin(), order.begin() + n_train});
      split.test = take_rows(data, {order.begin() + n_train, order.end()});
      return split;
    }
  }
  throw DataError("could not draw a two-class 50-50 split in 100 attempts");
}

NormStats fit_normalizer(const NumArray& train_features, NormKind kind) {
  if (train_features.rank() != 2 || train_features.rows() < 2) {
    throw DataError("normalizer needs a rank-2 matrix with at least 2 rows");
  }
  const std::size_t n = train_features.rows(), d = train_features.cols();
  NormStats stats;
  stats.kind = kind;
  stats.offset.resize(d);
  stats.scale.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (kind == NormKind::zscore) {
      double mean = 0;
      for (std::size_t i = 0; i < n; ++i) mean += train_features.at(i, j);
      mean /= static_cast<double>(n);
      double var = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double diff = train_features.at(i, j) - mean;
        var += diff * diff;
      }
      stats.offset[j] = mean;
      stats.scale[j] = std::sqrt(var / static_cast<double>(n));
    } else {
      double lo = train_features.at(0, j), hi = lo;
      for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, train_features.at(i, j));
        hi = std::max(hi, train_features.at(i, j));
      }
      stats.offset[j] = lo;
      stats.scale[j] = hi - lo;
    }
  }
  return stats;
}

NumArray apply_normalizer(const NumArray& features, const NormStats& stats) {
  if (features.rank() != 2 || features.cols() != stats.dim()) {
    throw ShapeError("normalizer fitted for " + std::to_string(stats.dim()) +
                     " features, got shape " + shape_to_string(features.shape()));
  }
  NumArray out = NumArray::zeros(features.shape());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (std::size_t j = 0; j < features.cols(); ++j) {
      out.at(i, j) = stats.scale[j] == 0
                         ? 0.0
                         : (features.at(i, j) - stats.offset[j]) / stats.scale[j];
    }
  }
  return out;
}

TrainTestSplit prepare_split(const Dataset& data, std::uint64_t seed, NormKind kind) {
  Rng rng(seed);
  TrainTestSplit split = split_50_50(data, rng);
  split.seed = seed;
  split.stats = fit_normalizer(split.train.features, kind);
  split.train.features = apply_normalizer(split.train.features, split.stats);
  split.test.features = apply_normalizer(split.test.features, split.stats);
  return split;
}

}  // namespace sleepbench
