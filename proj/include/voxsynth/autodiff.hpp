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
#include <functional>
#include <memory>
#include <vector>

#include "voxsynth/tensor.hpp"

namespace voxsynth {

// Reverse-mode automatic differentiation over whole-tensor operations.
//
// Each differentiable operation allocates one Node holding the forward value
// and a closure that scatters d(loss)/d(value) into the parents' gradient
// buffers. Graphs are rebuilt on every forward pass; parameters are
// long-lived leaf nodes whose gradients accumulate across backward() calls
// until explicitly zeroed. Everything runs on a single thread with a fixed
// reduction order, so results are bitwise reproducible.

struct Node;
using NodePtr = std::shared_ptr<Node>;

struct Node {
  Tensor value;
  Tensor grad;  // allocated on demand, same shape as value
  bool requires_grad = false;
  bool is_param = false;
  std::vector<NodePtr> parents;
  std::function<void(Node&)> backprop;
  std::uint64_t visit_mark = 0;

  // Allocate a zeroed gradient buffer if one does not exist yet.
  void ensure_grad();
};

// Shared handle to a graph node. Cheap to copy.
class Var {
 public:
  Var() = default;
  explicit Var(NodePtr node) : node_(std::move(node)) {}

  bool defined() const { return node_ != nullptr; }
  const Tensor& value() const { return node_->value; }
  Tensor& value() { return node_->value; }

  // Reading an unallocated gradient yields zeros (a parameter untouched by
  // the last backward pass has gradient zero).
  const Tensor& grad() const {
    node_->ensure_grad();
    return node_->grad;
  }
  Tensor& grad() {
    node_->ensure_grad();
    return node_->grad;
  }

  bool has_grad() const { return !node_->grad.empty(); }
  bool requires_grad() const { return node_->requires_grad; }
  bool is_param() const { return node_->is_param; }

  // Allocates (if needed) and zeroes the gradient buffer.
  void zero_grad();

  const NodePtr& node() const { return node_; }

 private:
  NodePtr node_;
};

// Leaf whose gradient the optimizer consumes.
Var make_parameter(Tensor init);
// Leaf without gradient tracking (inputs, targets).
Var make_constant(Tensor value);

// 1-D convolution with zero same-padding. input is [C_in, T] or
// [B, C_in, T]; weight is [C_out, C_in, K] with K odd; bias is [C_out].
// Output time length is ceil(T / stride).
Var conv1d(const Var& input, const Var& weight, const Var& bias, int stride);

// Piecewise-linear upsampling along time by an integer factor; the final
// segment extends by edge replication. input is [C, T] or [B, C, T], T >= 2.
Var upsample_linear(const Var& input, int factor);

Var relu(const Var& x);
Var leaky_relu(const Var& x, double slope);
Var tanh_op(const Var& x);
Var abs_op(const Var& x);

// Concatenate along the channel axis ([C,T] rank 2, [B,C,T] rank 3).
Var concat_channels(const std::vector<Var>& parts);

// Copy of the value with gradient flow cut.
Var detach(const Var& x);

// [B, C, T] -> [B, C*T]; row-major layout makes this a pure reshape.
Var flatten_rows(const Var& x);

// Same data, new shape; sizes must agree.
Var reshape(const Var& x, std::vector<std::int64_t> shape);

// Per-row dot product plus bias: x [B, F], w [F], b [1] -> [B].
Var row_dot(const Var& x, const Var& w, const Var& b);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);  // elementwise, equal shapes
Var scale(const Var& x, double k);
Var sum_all(const Var& x);   // -> scalar
Var mean_all(const Var& x);  // -> scalar

// Backpropagate from a scalar loss. Parameter gradients accumulate across
// calls; intermediate gradients are private to each call.
void backward(const Var& loss);

void zero_grads(const std::vector<Var>& params);

}  // namespace voxsynth
