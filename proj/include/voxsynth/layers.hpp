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
#include <vector>

#include "voxsynth/autodiff.hpp"
#include "voxsynth/rng.hpp"

namespace voxsynth {

enum class Activation { kIdentity, kRelu, kLeakyRelu, kTanh };

struct ConvLayerSpec {
  int in_channels = 0;
  int out_channels = 0;
  int kernel_size = 3;
  int stride = 1;
  Activation activation = Activation::kIdentity;
  double leaky_slope = 0.2;

  void validate() const;
  std::int64_t parameter_count() const {
    return static_cast<std::int64_t>(out_channels) * in_channels *
               kernel_size + out_channels;
  }
};

Var apply_activation(const Var& x, Activation activation, double leaky_slope);

// One convolution layer owning its weight and bias parameters. Weights are
// initialized uniformly in +/- sqrt(1 / (in_channels * kernel_size)), biases
// at zero, drawn from the provided seeded stream.
class Conv1dLayer {
 public:
  Conv1dLayer(const ConvLayerSpec& spec, Rng& rng);

  // Convolution, bias, then the spec's activation. Accepts [C, T] or
  // [B, C, T]; output time length is ceil(T / stride).
  Var forward(const Var& input) const;

  const ConvLayerSpec& spec() const { return spec_; }
  Var weight() const { return weight_; }
  Var bias() const { return bias_; }
  std::vector<Var> parameters() const { return {weight_, bias_}; }

 private:
  ConvLayerSpec spec_;
  Var weight_;  // [out_channels, in_channels, kernel_size]
  Var bias_;    // [out_channels]
};

}  // namespace voxsynth
