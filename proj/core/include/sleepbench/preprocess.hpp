#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "sleepbench/dataio.hpp"
#include "sleepbench/numarray.hpp"
#include "sleepbench/rng.hpp"

namespace sleepbench {

enum class NormKind { zscore, minmax };

std::string_view to_string(NormKind kind);
NormKind norm_kind_from(std::string_view name);

/// Per-feature normalization constants fitted on training rows only.
/// Applying computes (x - offset) / scale per column; columns whose scale is
/// 0 (constant in training) map to all-zeros.
///   zscore: offset = column mean, scale = population standard deviation
///   minmax: offset = column minimum, scale = column range
struct NormStats {
  NormKind kind = NormKind::zscore;
  std::vector<double> offset;
  std::vector<double> scale;

  std::size_t dim() const { return offset.size(); }
};

struct TrainTestSplit {
  Dataset train;
  Dataset test;
  NormStats stats;
  std::uint64_t seed = 0;
};

/// Shuffles row indices with rng and assigns the first ceil(n/2) to train.
/// Redraws (up to 100 attempts total) if either half would be single-class.
/// Features are left un-normalized; stats is empty.
TrainTestSplit split_50_50(const Dataset& data, Rng& rng);

NormStats fit_normalizer(const NumArray& train_features, NormKind kind = NormKind::zscore);

NumArray apply_normalizer(const NumArray& features, const NormStats& stats);

/// split_50_50 with the given seed, then fit on the train half and normalize
/// both halves. (dataset, seed) fully determines the result.
TrainTestSplit prepare_split(const Dataset& data, std::uint64_t seed,
                             NormKind kind = NormKind::zscore);

}  // namespace sleepbench
