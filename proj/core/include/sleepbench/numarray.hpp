#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sleepbench/rng.hpp"

namespace sleepbench {

/// Dense array of 64-bit floats, rank 1 to 3, row-major storage.
/// Treated as immutable once filled; sharing across threads is safe as long
/// as nobody writes.
class NumArray {
 public:
  NumArray() = default;
  NumArray(std::vector<std::size_t> shape, std::vector<double> data);

  static NumArray zeros(std::vector<std::size_t> shape);
  static NumArray full(std::vector<std::size_t> shape, double value);

  std::size_t rank() const { return shape_.size(); }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t extent(std::size_t axis) const {
    assert(axis < shape_.size());
    return shape_[axis];
  }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  // Rank-2 helpers.
  std::size_t rows() const {
    assert(rank() == 2);
    return shape_[0];
  }
  std::size_t cols() const {
    assert(rank() == 2);
    return shape_[1];
  }
  std::span<const double> row(std::size_t i) const& {
    assert(rank() == 2 && i < shape_[0]);
    return {data_.data() + i * shape_[1], shape_[1]};
  }
  std::span<const double> row(std::size_t) const&& = delete;  // would dangle

  // Element (i,j) of an [r,c] array lives at data[i*c + j]; rank-3 analogous.
  double& at(std::size_t i) {
    assert(rank() == 1 && i < shape_[0]);
    return data_[i];
  }
  double at(std::size_t i) const {
    assert(rank() == 1 && i < shape_[0]);
    return data_[i];
  }
  double& at(std::size_t i, std::size_t j) {
    assert(rank() == 2 && i < shape_[0] && j < shape_[1]);
    return data_[i * shape_[1] + j];
  }
  double at(std::size_t i, std::size_t j) const {
    assert(rank() == 2 && i < shape_[0] && j < shape_[1]);
    return data_[i * shape_[1] + j];
  }
  double& at(std::size_t i, std::size_t j, std::size_t k) {
    assert(rank() == 3 && i < shape_[0] && j < shape_[1] && k < shape_[2]);
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    assert(rank() == 3 && i < shape_[0] && j < shape_[1] && k < shape_[2]);
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::span<const double> flat() const& { return data_; }
  std::span<double> flat() & { return data_; }
  std::span<const double> flat() const&& = delete;  // would dangle
  std::span<double> flat() && = delete;

  /// Reinterprets the same flat data under a new shape of equal size.
  NumArray reshaped(std::vector<std::size_t> shape) const;

  bool same_shape(const NumArray& other) const { return shape_ == other.shape_; }

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::string shape_to_string(const std::vector<std::size_t>& shape);

/// Standard matrix product of two rank-2 arrays.
NumArray matmul(const NumArray& a, const NumArray& b);

/// Transpose of a rank-2 array.
NumArray transpose(const NumArray& a);

/// Fills an array of the given shape with uniform draws from [lo, hi),
/// advancing rng. Requires lo < hi.
NumArray rand_uniform(Rng& rng, std::vector<std::size_t> shape, double lo, double hi);

}  // namespace sleepbench
