#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "sleepbench/numarray.hpp"
#include "sleepbench/rng.hpp"

namespace sleepbench {

enum class CnnVariant { conv1d_1, conv1d_2 };

std::string_view to_string(CnnVariant variant);

/// Stride-1 cross-correlation with symmetric zero padding, so the output
/// length equals the input length. Kernel length must be odd.
struct Conv1dLayer {
  NumArray kernels;          // [out_channels, in_channels, kernel_len]
  std::vector<double> bias;  // [out_channels]

  std::size_t out_channels() const { return kernels.extent(0); }
  std::size_t in_channels() const { return kernels.extent(1); }
  std::size_t kernel_len() const { return kernels.extent(2); }
};

enum class PoolMode {
  reduce,   // pool_len = stride = 2, output length = floor(len / 2)
  preserve  // stride 1 with same padding, output length = input length
};

struct MaxPool1dLayer {
  int pool_len = 2;
  int stride = 2;
  PoolMode mode = PoolMode::reduce;
};

struct DenseLayer {
  NumArray weights;          // [out, in]
  std::vector<double> bias;  // [out]
};

struct CnnTrainConfig {
  double learning_rate = 0.05;
  int epochs = 300;
  double dropout_rate = 0.5;  // in [0, 1)
  int channels1 = 8;
  int channels2 = 16;
  int kernel_len = 3;
  int hidden = 32;
  std::uint64_t seed = 0;
};

/// Two Conv-ReLU-MaxPool blocks, a hidden dense layer, dropout, and a
/// two-way dense + softmax head. The conv1d_1 variant halves the sequence
/// length at each pool; conv1d_2 keeps it constant.
struct CnnModel {
  CnnVariant variant = CnnVariant::conv1d_1;
  std::size_t input_dim = 0;
  Conv1dLayer conv1, conv2;
  MaxPool1dLayer pool1, pool2;
  DenseLayer dense1, dense2;
  double dropout_rate = 0.5;
  bool train_mode = false;

  /// Sequence length after the second pool.
  std::size_t pooled_len() const;
  /// Flattened width fed to the first dense layer (channels2 * pooled_len).
  std::size_t flat_len() const { return conv2.out_channels() * pooled_len(); }
};

NumArray conv1d_forward(const NumArray& input, const Conv1dLayer& layer);

struct ConvGrads {
  NumArray input;
  NumArray kernels;
  std::vector<double> bias;
};
ConvGrads conv1d_backward(const NumArray& grad_out, const NumArray& input,
                          const Conv1dLayer& layer);

NumArray relu_forward(const NumArray& input);
NumArray relu_backward(const NumArray& grad_out, const NumArray& input);

struct PoolResult {
  NumArray output;
  std::vector<std::size_t> argmax;  // flat input index per output element
};
/// Windowed maxima over the length axis of a [batch, channels, len] array.
/// Ties keep the first maximum. Reduce mode needs len >= 2.
PoolResult maxpool_forward(const NumArray& input, const MaxPool1dLayer& layer);
NumArray maxpool_backward(const NumArray& grad_out, const std::vector<std::size_t>& argmax,
                          const std::vector<std::size_t>& input_shape,
                          const MaxPool1dLayer& layer);

NumArray dense_forward(const NumArray& input, const DenseLayer& layer);
struct DenseGrads {
  NumArray input;
  NumArray weights;
  std::vector<double> bias;
};
DenseGrads dense_backward(const NumArray& grad_out, const NumArray& input,
                          const DenseLayer& layer);

struct DropoutResult {
  NumArray output;
  NumArray mask;  // multiplier per element: 0 or 1/(1-rate); all ones in eval
};
/// Inverted dropout: training zeroes each element with probability rate and
/// scales survivors by 1/(1-rate); eval mode is the identity.
DropoutResult dropout(const NumArray& input, double rate, Rng& rng, bool train_mode);

struct SoftmaxResult {
  double loss = 0;
  NumArray grad_logits;
};
/// Numerically stable mean softmax cross-entropy over [batch, 2] logits.
/// grad_logits = (softmax - onehot) / batch.
SoftmaxResult softmax_cross_entropy(const NumArray& logits, const std::vector<int>& labels);

/// Builds an untrained model for d input features. Weights are initialized
/// uniform in [-s, s] with s = sqrt(6 / (fan_in + fan_out)); biases start at
/// zero. conv1d_1 needs d >= 4 so that two reduce pools keep a nonzero
/// length.
CnnModel build_cnn(CnnVariant variant, std::size_t d, const CnnTrainConfig& cfg, Rng& rng);

struct CnnTrainResult {
  CnnModel model;  // returned in eval mode
  std::vector<double> epoch_losses;
};
/// Full-batch gradient descent on softmax cross-entropy. Dropout is active
/// only while training. epoch_losses[e] is the loss the epoch-e update was
/// computed from.
CnnTrainResult train_cnn(CnnModel model, const NumArray& features, const std::vector<int>& labels,
                         const CnnTrainConfig& cfg, Rng& rng);

/// Class scores (logits) for a batch of rows; model must be in eval mode.
NumArray cnn_scores(const CnnModel& model, const NumArray& features);

/// Argmax over the two class scores; equal scores resolve to class 1.
std::vector<int> predict_cnn(const CnnModel& model, const NumArray& features);

}  // namespace sleepbench
