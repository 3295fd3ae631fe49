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

#include <array>
#include <cstdint>
#include <vector>

#include "voxsynth/layers.hpp"
#include "voxsynth/rng.hpp"

namespace voxsynth {

inline constexpr int kUnetDepth = 5;  // encoder/decoder stages
inline constexpr int kTimeStride = 1 << kUnetDepth;  // total downsampling

struct NetworkConfig {
  int block_size = 128;       // frames per block; divisible by kTimeStride
  int feature_channels = 64;  // output vocoder features
  double width_multiplier = 1.0;
  double leaky_slope = 0.2;
  std::array<int, kUnetDepth> base_widths{64, 128, 256, 512, 512};

  int scaled_width(int stage) const;
  void validate() const;
};

// Encoder-decoder generator over blocks of frames. Five stride-2 encoder
// convolutions, then five decoder stages of linear upsampling followed by a
// stride-1 convolution, with the matching encoder activation concatenated
// into each of the first four decoder stages. All layers use kernel size 3
// and ReLU; the output layer uses tanh, so samples live in (-1, 1).
// Transposed convolutions are deliberately not used anywhere.
class Generator {
 public:
  Generator(const NetworkConfig& cfg, int cond_channels, Rng& rng);

  // cond: [cond_channels, N] or [B, cond_channels, N]
  // out:  [feature_channels, N] or [B, feature_channels, N]
  Var forward(const Var& cond) const;

  // Diagnostic forward with each skip connection scaled by a gain; gain 0
  // ablates the connection. gains are ordered from shallowest encoder stage.
  Var forward_with_skip_gains(
      const Var& cond, const std::array<double, kUnetDepth - 1>& gains) const;

  std::vector<Var> parameters() const;
  std::int64_t parameter_count() const;
  std::vector<ConvLayerSpec> layer_specs() const;
  const NetworkConfig& config() const { return cfg_; }
  int cond_channels() const { return cond_channels_; }

 private:
  NetworkConfig cfg_;
  int cond_channels_;
  std::vector<Conv1dLayer> encoder_;
  std::vector<Conv1dLayer> decoder_;
};

// Critic scoring a (feature block, conditioning) pair. Encoder-shaped stack
// of five stride-2 LeakyReLU convolutions and a linear head; the head has no
// saturating nonlinearity, so scores are unbounded reals.
class Critic {
 public:
  Critic(const NetworkConfig& cfg, int in_channels, Rng& rng);

  // input: [in_channels, N] or [B, in_channels, N] -> [1] or [B]
  Var forward(const Var& input) const;

  std::vector<Var> parameters() const;
  std::int64_t parameter_count() const;
  std::vector<ConvLayerSpec> layer_specs() const;
  Var head_weight() const { return head_weight_; }
  Var head_bias() const { return head_bias_; }
  int in_channels() const { return in_channels_; }

 private:
  NetworkConfig cfg_;
  int in_channels_;
  std::vector<Conv1dLayer> layers_;
  Var head_weight_;  // [w4 * block_size / kTimeStride]
  Var head_bias_;    // [1]
};

// Concatenates a feature block with its conditioning along channels and
// scores the pair. Time axes must agree.
Var critic_score(const Critic& critic, const Var& block, const Var& cond);

}  // namespace voxsynth
