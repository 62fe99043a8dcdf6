#include "sleepbench/numarray.hpp"

#include <utility>

#include "sleepbench/errors.hpp"

namespace sleepbench {

namespace {

std::size_t checked_volume(const std::vector<std::size_t>& shape) {
  if (shape.empty() || shape.size() > 3) {
    throw ShapeError("array rank must be 1, 2 or 3, got " + std::to_string(shape.size()));
  }
  std::size_t volume = 1;
  for (std::size_t extent : shape) {
    if (extent == 0) throw ShapeError("array extents must be >= 1, got shape " + shape_to_string(shape));
    volume *= extent;
  }
  return volume;
}

}  // namespace

NumArray::NumArray(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  const std::size_t volume = checked_volume(shape_);
  if (volume != data_.size()) {
    throw ShapeError("shape " + shape_to_string(shape_) + " wants " + std::to_string(volume) +
                     " elements, got " + std::to_string(data_.size()));
  }
}

NumArray NumArray::zeros(std::vector<std::size_t> shape) {
  const std::size_t volume = checked_volume(shape);
  return NumArray(std::move(shape), std::vector<double>(volume, 0.0));
}

NumArray NumArray::full(std::vector<std::size_t> shape, double value) {
  const std::size_t volume = checked_volume(shape);
  return NumArray(std::move(shape), std::vector<double>(volume, value));
}

NumArray NumArray::reshaped(std::vector<std::size_t> shape) const {
  return NumArray(std::move(shape), data_);
}

std::string shape_to_string(const std::vector<std::size_t>& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

NumArray matmul(const NumArray& a, const NumArray& b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw ShapeError("matmul needs rank-2 operands, got " + shape_to_string(a.shape()) + " and " +
                     shape_to_string(b.shape()));
  }
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul dimension mismatch: " + shape_to_string(a.shape()) + " x " +
                     shape_to_string(b.shape()));
  }
  const std::size_t n = a.rows(), inner = a.cols(), m = b.cols();
  NumArray out = NumArray::zeros({n, m});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = a.at(i, k);
      for (std::size_t j = 0; j < m; ++j) {
        out.at(i, j) += aik * b.at(k, j);
      }
    }
  }
  return out;
}

NumArray transpose(const NumArray& a) {
  if (a.rank() != 2) {
    throw ShapeError("transpose needs a rank-2 array, got " + shape_to_string(a.shape()));
  }
  NumArray out = NumArray::zeros({a.cols(), a.rows()});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out.at(j, i) = a.at(i, j);
    }
  }
  return out;
}

NumArray rand_uniform(Rng& rng, std::vector<std::size_t> shape, double lo, double hi) {
  if (!(lo < hi)) {
    throw ParamError("rand_uniform wants lo < hi, got lo=" + std::to_string(lo) +
                     " hi=" + std::to_string(hi));
  }
  NumArray out = NumArray::zeros(std::move(shape));
  for (double& x : out.flat()) x = rng.next_uniform(lo, hi);
  return out;
}

}  // namespace sleepbench
