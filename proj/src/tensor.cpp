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
#include "voxsynth/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "voxsynth/errors.hpp"

namespace voxsynth {

namespace {

std::int64_t checked_product(const std::vector<std::int64_t>& shape) {
  if (shape.empty()) {
    throw ShapeError("tensor shape must have at least one dimension");
  }
  std::int64_t n = 1;
  for (size_t i = 0; i < shape.size(); ++i) {
    if (shape[i] <= 0) {
      throw ShapeError("tensor dimension " + std::to_string(i) +
                       " must be positive, got " + std::to_string(shape[i]));
    }
    n *= shape[i];
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::int64_t> shape) : shape_(std::move(shape)) {
  values_.assign(static_cast<size_t>(checked_product(shape_)), 0.0);
}

Tensor::Tensor(std::vector<std::int64_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  const std::int64_t n = checked_product(shape_);
  if (n != static_cast<std::int64_t>(values_.size())) {
    throw ShapeError("tensor shape " + shape_str() + " requires " +
                     std::to_string(n) + " values, got " +
                     std::to_string(values_.size()));
  }
}

Tensor Tensor::zeros(std::vector<std::int64_t> shape) {
  return Tensor(std::move(shape));
}

Tensor Tensor::full(std::vector<std::int64_t> shape, double value) {
  Tensor t(std::move(shape));
  t.fill(value);
  return t;
}

Tensor Tensor::scalar(double value) { return Tensor({1}, {value}); }

bool Tensor::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double value) {
  std::fill(values_.begin(), values_.end(), value);
}

Tensor Tensor::reshaped(std::vector<std::int64_t> shape) const {
  const std::int64_t n = checked_product(shape);
  if (n != size()) {
    std::ostringstream os;
    os << "cannot reshape " << shape_str() << " (" << size() << " values) to "
       << Tensor(shape).shape_str();
    throw ShapeError(os.str());
  }
  return Tensor(std::move(shape), values_);
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (i > 0) os << ", ";
    os << shape_[i];
  }
  os << "]";
  return os.str();
}

}  // namespace voxsynth
