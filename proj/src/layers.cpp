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
#include "voxsynth/layers.hpp"

#include <cmath>
#include <string>

#include "voxsynth/errors.hpp"

namespace voxsynth {

void ConvLayerSpec::validate() const {
  if (in_channels <= 0 || out_channels <= 0) {
    throw ConfigError("conv layer channels must be positive, got in=" +
                      std::to_string(in_channels) + " out=" +
                      std::to_string(out_channels));
  }
  if (kernel_size <= 0 || kernel_size % 2 == 0) {
    throw ConfigError("conv kernel size must be a positive odd integer, got " +
                      std::to_string(kernel_size));
  }
  if (stride <= 0) {
    throw ConfigError("conv stride must be positive, got " +
                      std::to_string(stride));
  }
  if (activation == Activation::kLeakyRelu &&
      !(leaky_slope > 0.0 && leaky_slope < 1.0)) {
    throw ConfigError("leaky_relu slope must be in (0, 1), got " +
                      std::to_string(leaky_slope));
  }
}

Var apply_activation(const Var& x, Activation activation, double leaky_slope) {
  switch (activation) {
    case Activation::kIdentity:
      return x;
    case Activation::kRelu:
      return relu(x);
    case Activation::kLeakyRelu:
      return leaky_relu(x, leaky_slope);
    case Activation::kTanh:
      return tanh_op(x);
  }
  throw ConfigError("unknown activation");
}

Conv1dLayer::Conv1dLayer(const ConvLayerSpec& spec, Rng& rng) : spec_(spec) {
  spec_.validate();
  const double bound =
      std::sqrt(1.0 / (static_cast<double>(spec_.in_channels) *
                       spec_.kernel_size));
  Tensor w({spec_.out_channels, spec_.in_channels, spec_.kernel_size});
  for (double& v : w.values()) v = rng.uniform(-bound, bound);
  weight_ = make_parameter(std::move(w));
  bias_ = make_parameter(Tensor({spec_.out_channels}));
}

Var Conv1dLayer::forward(const Var& input) const {
  Var y = conv1d(input, weight_, bias_, spec_.stride);
  return apply_activation(y, spec_.activation, spec_.leaky_slope);
}

}  // namespace voxsynth
