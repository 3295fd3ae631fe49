/* Copyright 2026 The voxsynth Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace voxsynth {

// Dense n-dimensional array of doubles in row-major order. This is the
// carrier for every numeric quantity in the library: feature blocks,
// conditioning stacks, network parameters and their gradients.
class Tensor {
 public:
  Tensor() = default;

  // Zero-filled tensor. Every dimension must be positive.
  explicit Tensor(std::vector<std::int64_t> shape);
  Tensor(std::vector<std::int64_t> shape, std::vector<double> values);

  static Tensor zeros(std::vector<std::int64_t> shape);
  static Tensor full(std::vector<std::int64_t> shape, double value);
  static Tensor scalar(double value);

  const std::vector<std::int64_t>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  std::int64_t dim(int axis) const { return shape_[static_cast<size_t>(axis)]; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  bool empty() const { return values_.empty(); }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double& operator[](std::int64_t i) { return values_[static_cast<size_t>(i)]; }
  double operator[](std::int64_t i) const { return values_[static_cast<size_t>(i)]; }

  // Unchecked rank-2 / rank-3 indexing used by the compute kernels.
  double& at(std::int64_t i, std::int64_t j) {
    return values_[static_cast<size_t>(i * shape_[1] + j)];
  }
  double at(std::int64_t i, std::int64_t j) const {
    return values_[static_cast<size_t>(i * shape_[1] + j)];
  }
  double& at(std::int64_t i, std::int64_t j, std::int64_t k) {
    return values_[static_cast<size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }
  double at(std::int64_t i, std::int64_t j, std::int64_t k) const {
    return values_[static_cast<size_t>((i * shape_[1] + j) * shape_[2] + k)];
  }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;
  void fill(double value);

  // Same data, new shape; sizes must agree.
  Tensor reshaped(std::vector<std::int64_t> shape) const;

  // "[2, 64, 128]" - for error messages.
  std::string shape_str() const;

 private:
  std::vector<std::int64_t> shape_;
  std::vector<double> values_;
};

}  // namespace voxsynth
