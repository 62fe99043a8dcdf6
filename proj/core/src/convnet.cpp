#include "sleepbench/convnet.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sleepbench/errors.hpp"

namespace sleepbench {

namespace {

void check_rank3(const NumArray& a, std::string_view what) {
  if (a.rank() != 3) {
    throw ShapeError(std::string(what) + " must be rank-3 [batch, channels, len], got " +
                     shape_to_string(a.shape()));
  }
}

std::size_t pool_output_len(std::size_t len, const MaxPool1dLayer& layer) {
  if (layer.mode == PoolMode::reduce) {
    if (len < 2) throw ShapeError("reduce-mode pooling needs length >= 2, got " + std::to_string(len));
    return len / 2;
  }
  return len;
}

void check_pool_layer(const MaxPool1dLayer& layer) {
  if (layer.mode == PoolMode::reduce) {
    if (layer.pool_len != 2 || layer.stride != 2) {
      throw ParamError("reduce-mode pooling requires pool_len == stride == 2");
    }
  } else {
    if (layer.stride != 1 || layer.pool_len < 1 || layer.pool_len % 2 == 0) {
      throw ParamError("preserve-mode pooling requires stride 1 and odd pool_len");
    }
  }
}

}  // namespace

std::string_view to_string(CnnVariant variant) {
  return variant == CnnVariant::conv1d_1 ? "conv1d_1" : "conv1d_2";
}

std::size_t CnnModel::pooled_len() const {
  std::size_t len = input_dim;
  len = pool_output_len(len, pool1);
  len = pool_output_len(len, pool2);
  return len;
}

NumArray conv1d_forward(const NumArray& input, const Conv1dLayer& layer) {
  check_rank3(input, "conv input");
  if (layer.kernels.rank() != 3 || layer.kernel_len() % 2 == 0) {
    throw ShapeError("conv kernels must be [out_ch, in_ch, odd kernel_len], got " +
                     shape_to_string(layer.kernels.shape()));
  }
  if (input.extent(1) != layer.in_channels()) {
    throw ShapeError("conv expects " + std::to_string(layer.in_channels()) +
                     " input channels, got " + std::to_string(input.extent(1)));
  }
  const std::size_t batch = input.extent(0), in_ch = layer.in_channels();
  const std::size_t len = input.extent(2), out_ch = layer.out_channels();
  const std::size_t klen = layer.kernel_len();
  const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>(klen - 1) / 2;

  NumArray out = NumArray::zeros({batch, out_ch, len});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t oc = 0; oc < out_ch; ++oc) {
      for (std::size_t t = 0; t < len; ++t) {
        double acc = layer.bias[oc];
        for (std::size_t ic = 0; ic < in_ch; ++ic) {
          for (std::size_t k = 0; k < klen; ++k) {
            const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t + k) - pad;
            if (s < 0 || s >= static_cast<std::ptrdiff_t>(len)) continue;
            acc += input.at(b, ic, static_cast<std::size_t>(s)) * layer.kernels.at(oc, ic, k);
          }
        }
        out.at(b, oc, t) = acc;
      }
    }
  }
  return out;
}

ConvGrads conv1d_backward(const NumArray& grad_out, const NumArray& input,
                          const Conv1dLayer& layer) {
  check_rank3(grad_out, "conv grad_out");
  check_rank3(input, "conv input");
  const std::size_t batch = input.extent(0), in_ch = layer.in_channels();
  const std::size_t len = input.extent(2), out_ch = layer.out_channels();
  const std::size_t klen = layer.kernel_len();
  if (grad_out.shape() != std::vector<std::size_t>{batch, out_ch, len}) {
    throw ShapeError("conv grad_out shape " + shape_to_string(grad_out.shape()) +
                     " does not match forward output");
  }
  const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>(klen - 1) / 2;

  ConvGrads grads;
  grads.input = NumArray::zeros(input.shape());
  grads.kernels = NumArray::zeros(layer.kernels.shape());
  grads.bias.assign(out_ch, 0.0);

  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t oc = 0; oc < out_ch; ++oc) {
      for (std::size_t t = 0; t < len; ++t) {
        const double g = grad_out.at(b, oc, t);
        if (g == 0) continue;
        grads.bias[oc] += g;
        for (std::size_t ic = 0; ic < in_ch; ++ic) {
          for (std::size_t k = 0; k < klen; ++k) {
            const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(t + k) - pad;
            if (s < 0 || s >= static_cast<std::ptrdiff_t>(len)) continue;
            grads.kernels.at(oc, ic, k) += g * input.at(b, ic, static_cast<std::size_t>(s));
            grads.input.at(b, ic, static_cast<std::size_t>(s)) += g * layer.kernels.at(oc, ic, k);
          }
        }
      }
    }
  }
  return grads;
}

NumArray relu_forward(const NumArray& input) {
  NumArray out = input;
  for (double& x : out.flat()) x = std::max(x, 0.0);
  return out;
}

NumArray relu_backward(const NumArray& grad_out, const NumArray& input) {
  if (!grad_out.same_shape(input)) {
    throw ShapeError("relu grad shape " + shape_to_string(grad_out.shape()) +
                     " != input shape " + shape_to_string(input.shape()));
  }
  NumArray out = grad_out;
  const std::span<const double> in = input.flat();
  std::span<double> g = out.flat();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (in[i] <= 0) g[i] = 0;
  }
  return out;
}

PoolResult maxpool_forward(const NumArray& input, const MaxPool1dLayer& layer) {
  check_rank3(input, "pool input");
  check_pool_layer(layer);
  const std::size_t batch = input.extent(0), channels = input.extent(1), len = input.extent(2);
  const std::size_t out_len = pool_output_len(len, layer);
  const std::ptrdiff_t half = layer.mode == PoolMode::preserve ? (layer.pool_len - 1) / 2 : 0;

  PoolResult result;
  result.output = NumArray::zeros({batch, channels, out_len});
  result.argmax.resize(result.output.size());
  std::size_t o = 0;
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t c = 0; c < channels; ++c) {
      for (std::size_t t = 0; t < out_len; ++t, ++o) {
        std::ptrdiff_t begin, end;  // [begin, end) window, clipped to the sequence
        if (layer.mode == PoolMode::reduce) {
          begin = static_cast<std::ptrdiff_t>(2 * t);
          end = begin + 2;
        } else {
          begin = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(t) - half);
          end = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(len),
                                         static_cast<std::ptrdiff_t>(t) + half + 1);
        }
        std::size_t best = static_cast<std::size_t>(begin);
        double best_value = input.at(b, c, best);
        for (std::ptrdiff_t s = begin + 1; s < end; ++s) {
          const double v = input.at(b, c, static_cast<std::size_t>(s));
          if (v > best_value) {  // first maximum wins ties
            best_value = v;
            best = static_cast<std::size_t>(s);
          }
        }
        result.output.at(b, c, t) = best_value;
        result.argmax[o] = (b * channels + c) * len + best;
      }
    }
  }
  return result;
}

NumArray maxpool_backward(const NumArray& grad_out, const std::vector<std::size_t>& argmax,
                          const std::vector<std::size_t>& input_shape,
                          const MaxPool1dLayer& layer) {
  check_pool_layer(layer);
  if (input_shape.size() != 3) {
    throw ContractError("maxpool_backward wants a rank-3 input shape");
  }
  const std::size_t expected_out = input_shape[0] * input_shape[1] *
                                   pool_output_len(input_shape[2], layer);
  if (grad_out.size() != expected_out || argmax.size() != expected_out) {
    throw ContractError("maxpool_backward indices do not match the forward call (expected " +
                        std::to_string(expected_out) + " elements, got grad " +
                        std::to_string(grad_out.size()) + ", argmax " +
                        std::to_string(argmax.size()) + ")");
  }
  NumArray grad_input = NumArray::zeros(input_shape);
  std::span<double> flat = grad_input.flat();
  const std::span<const double> g = grad_out.flat();
  for (std::size_t o = 0; o < g.size(); ++o) flat[argmax[o]] += g[o];
  return grad_input;
}

NumArray dense_forward(const NumArray& input, const DenseLayer& layer) {
  NumArray out = matmul(input, transpose(layer.weights));
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out.at(i, j) += layer.bias[j];
  }
  return out;
}

DenseGrads dense_backward(const NumArray& grad_out, const NumArray& input,
                          const DenseLayer& layer) {
  DenseGrads grads;
  grads.input = matmul(grad_out, layer.weights);
  grads.weights = matmul(transpose(grad_out), input);
  grads.bias.assign(grad_out.cols(), 0.0);
  for (std::size_t i = 0; i < grad_out.rows(); ++i) {
    for (std::size_t j = 0; j < grad_out.cols(); ++j) grads.bias[j] += grad_out.at(i, j);
  }
  return grads;
}

DropoutResult dropout(const NumArray& input, double rate, Rng& rng, bool train_mode) {
  if (!(rate >= 0 && rate < 1)) {
    throw ParamError("dropout rate must be in [0, 1), got " + std::to_string(rate));
  }
  DropoutResult result;
  result.mask = NumArray::full(input.shape(), 1.0);
  result.output = input;
  if (!train_mode || rate == 0) return result;

  const double keep_scale = 1.0 / (1.0 - rate);
  std::span<double> mask = result.mask.flat();
  std::span<double> out = result.output.flat();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = rng.next_double() < rate ? 0.0 : keep_scale;
    out[i] *= mask[i];
  }
  return result;
}

SoftmaxResult softmax_cross_entropy(const NumArray& logits, const std::vector<int>& labels) {
  if (logits.rank() != 2 || logits.cols() != 2) {
    throw ShapeError("logits must be [batch, 2], got " + shape_to_string(logits.shape()));
  }
  if (logits.rows() != labels.size()) {
    throw ShapeError("logit rows != label count");
  }
  for (double v : logits.flat()) {
    if (!std::isfinite(v)) throw ParamError("non-finite logits");
  }
  const std::size_t n = logits.rows();
  SoftmaxResult result;
  result.grad_logits = NumArray::zeros(logits.shape());
  for (std::size_t i = 0; i < n; ++i) {
    const double l0 = logits.at(i, 0), l1 = logits.at(i, 1);
    const double m = std::max(l0, l1);
    const double e0 = std::exp(l0 - m), e1 = std::exp(l1 - m);
    const double z = e0 + e1;
    const double log_z = m + std::log(z);
    result.loss += log_z - logits.at(i, static_cast<std::size_t>(labels[i]));
    result.grad_logits.at(i, 0) = (e0 / z - (labels[i] == 0 ? 1.0 : 0.0)) / static_cast<double>(n);
    result.grad_logits.at(i, 1) = (e1 / z - (labels[i] == 1 ? 1.0 : 0.0)) / static_cast<double>(n);
  }
  result.loss /= static_cast<double>(n);
  return result;
}

CnnModel build_cnn(CnnVariant variant, std::size_t d, const CnnTrainConfig& cfg, Rng& rng) {
  if (variant == CnnVariant::conv1d_1 && d < 4) {
    throw ParamError("conv1d_1 needs at least 4 features (two reduce pools), got " +
                     std::to_string(d));
  }
  if (d < 1) throw ParamError("conv1d_2 needs at least 1 feature");
  if (cfg.kernel_len < 1 || cfg.kernel_len % 2 == 0) {
    throw ParamError("kernel_len must be odd and >= 1");
  }
  if (cfg.channels1 < 1 || cfg.channels2 < 1 || cfg.hidden < 1) {
    throw ParamError("channel and hidden sizes must be >= 1");
  }
  if (!(cfg.dropout_rate >= 0 && cfg.dropout_rate < 1)) {
    throw ParamError("dropout_rate must be in [0, 1)");
  }

  CnnModel model;
  model.variant = variant;
  model.input_dim = d;
  model.dropout_rate = cfg.dropout_rate;
  if (variant == CnnVariant::conv1d_1) {
    model.pool1 = {2, 2, PoolMode::reduce};
    model.pool2 = {2, 2, PoolMode::reduce};
  } else {
    model.pool1 = {3, 1, PoolMode::preserve};
    model.pool2 = {3, 1, PoolMode::preserve};
  }

  const auto c1 = static_cast<std::size_t>(cfg.channels1);
  const auto c2 = static_cast<std::size_t>(cfg.channels2);
  const auto klen = static_cast<std::size_t>(cfg.kernel_len);
  const auto hidden = static_cast<std::size_t>(cfg.hidden);

  auto glorot = [&rng](std::vector<std::size_t> shape, std::size_t fan_in, std::size_t fan_out) {
    const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    return rand_uniform(rng, std::move(shape), -s, s);
  };
  model.conv1.kernels = glorot({c1, 1, klen}, klen, c1 * klen);
  model.conv1.bias.assign(c1, 0.0);
  model.conv2.kernels = glorot({c2, c1, klen}, c1 * klen, c2 * klen);
  model.conv2.bias.assign(c2, 0.0);

  const std::size_t flat = model.flat_len();
  model.dense1.weights = glorot({hidden, flat}, flat, hidden);
  model.dense1.bias.assign(hidden, 0.0);
  model.dense2.weights = glorot({2, hidden}, hidden, 2);
  model.dense2.bias.assign(2, 0.0);
  return model;
}

namespace {

struct ForwardCache {
  NumArray sequence;  // [batch, 1, d]
  NumArray conv1_out, relu1_out;
  PoolResult pool1;
  NumArray conv2_out, relu2_out;
  PoolResult pool2;
  NumArray flat;
  NumArray dense1_out;
  DropoutResult drop;
  NumArray logits;
};

NumArray rows_to_sequence(const NumArray& features) {
  if (features.rank() != 2) {
    throw ShapeError("features must be rank-2, got " + shape_to_string(features.shape()));
  }
  return features.reshaped({features.rows(), 1, features.cols()});
}

ForwardCache forward_pass(const CnnModel& model, const NumArray& features, Rng* rng) {
  if (features.cols() != model.input_dim) {
    throw ShapeError("model expects " + std::to_string(model.input_dim) + " features, got shape " +
                     shape_to_string(features.shape()));
  }
  const bool training = rng != nullptr;
  ForwardCache cache;
  cache.sequence = rows_to_sequence(features);
  cache.conv1_out = conv1d_forward(cache.sequence, model.conv1);
  cache.relu1_out = relu_forward(cache.conv1_out);
  cache.pool1 = maxpool_forward(cache.relu1_out, model.pool1);
  cache.conv2_out = conv1d_forward(cache.pool1.output, model.conv2);
  cache.relu2_out = relu_forward(cache.conv2_out);
  cache.pool2 = maxpool_forward(cache.relu2_out, model.pool2);
  cache.flat = cache.pool2.output.reshaped({features.rows(), model.flat_len()});
  cache.dense1_out = dense_forward(cache.flat, model.dense1);
  if (training) {
    cache.drop = dropout(cache.dense1_out, model.dropout_rate, *rng, true);
  } else {
    cache.drop.output = cache.dense1_out;
  }
  cache.logits = dense_forward(cache.drop.output, model.dense2);
  return cache;
}

struct CnnGrads {
  ConvGrads conv1, conv2;
  DenseGrads dense1, dense2;
};

CnnGrads backward_pass(const CnnModel& model, const ForwardCache& cache,
                       const NumArray& grad_logits, bool training) {
  CnnGrads grads;
  grads.dense2 = dense_backward(grad_logits, cache.drop.output, model.dense2);
  NumArray grad_hidden = std::move(grads.dense2.input);
  if (training) {
    std::span<double> g = grad_hidden.flat();
    const std::span<const double> mask = cache.drop.mask.flat();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= mask[i];
  }
  grads.dense1 = dense_backward(grad_hidden, cache.flat, model.dense1);

  const NumArray grad_pool2 = grads.dense1.input.reshaped(cache.pool2.output.shape());
  NumArray grad_relu2 =
      maxpool_backward(grad_pool2, cache.pool2.argmax, cache.relu2_out.shape(), model.pool2);
  NumArray grad_conv2 = relu_backward(grad_relu2, cache.conv2_out);
  grads.conv2 = conv1d_backward(grad_conv2, cache.pool1.output, model.conv2);

  NumArray grad_relu1 = maxpool_backward(grads.conv2.input, cache.pool1.argmax,
                                         cache.relu1_out.shape(), model.pool1);
  NumArray grad_conv1 = relu_backward(grad_relu1, cache.conv1_out);
  grads.conv1 = conv1d_backward(grad_conv1, cache.sequence, model.conv1);
  return grads;
}

void apply_update(NumArray& param, const NumArray& grad, double lr) {
  std::span<double> p = param.flat();
  const std::span<const double> g = grad.flat();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
}

void apply_update(std::vector<double>& param, const std::vector<double>& grad, double lr) {
  for (std::size_t i = 0; i < param.size(); ++i) param[i] -= lr * grad[i];
}

}  // namespace

CnnTrainResult train_cnn(CnnModel model, const NumArray& features, const std::vector<int>& labels,
                         const CnnTrainConfig& cfg, Rng& rng) {
  if (features.rank() != 2 || features.rows() != labels.size()) {
    throw ShapeError("training features must be [n, d] with one label per row");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw ParamError("labels must be in {0,1}");
  }
  if (cfg.learning_rate <= 0) throw ParamError("learning_rate must be > 0");
  if (cfg.epochs < 0) throw ParamError("epochs must be >= 0");

  CnnTrainResult result;
  model.train_mode = true;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const ForwardCache cache = forward_pass(model, features, &rng);
    const SoftmaxResult sm = softmax_cross_entropy(cache.logits, labels);
    if (!std::isfinite(sm.loss)) {
      throw DivergenceError("CNN training diverged at epoch " + std::to_string(epoch) +
                            " (learning rate " + std::to_string(cfg.learning_rate) + ")");
    }
    result.epoch_losses.push_back(sm.loss);
    const CnnGrads grads = backward_pass(model, cache, sm.grad_logits, true);
    apply_update(model.conv1.kernels, grads.conv1.kernels, cfg.learning_rate);
    apply_update(model.conv1.bias, grads.conv1.bias, cfg.learning_rate);
    apply_update(model.conv2.kernels, grads.conv2.kernels, cfg.learning_rate);
    apply_update(model.conv2.bias, grads.conv2.bias, cfg.learning_rate);
    apply_update(model.dense1.weights, grads.dense1.weights, cfg.learning_rate);
    apply_update(model.dense1.bias, grads.dense1.bias, cfg.learning_rate);
    apply_update(model.dense2.weights, grads.dense2.weights, cfg.learning_rate);
    apply_update(model.dense2.bias, grads.dense2.bias, cfg.learning_rate);
  }
  model.train_mode = false;
  result.model = std::move(model);
  return result;
}

NumArray cnn_scores(const CnnModel& model, const NumArray& features) {
  if (model.train_mode) {
    throw ContractError("predict needs an eval-mode model (dropout would be stochastic)");
  }
  return forward_pass(model, features, nullptr).logits;
}

std::vector<int> predict_cnn(const CnnModel& model, const NumArray& features) {
  const NumArray logits = cnn_scores(model, features);
  std::vector<int> out(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    out[i] = logits.at(i, 1) >= logits.at(i, 0) ? 1 : 0;
  }
  return out;
}

}  // namespace sleepbench
