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
#include "voxsynth/model.hpp"

#include <cmath>
#include <string>

#include "voxsynth/errors.hpp"

namespace voxsynth {

int NetworkConfig::scaled_width(int stage) const {
  const double w = base_widths[static_cast<size_t>(stage)] * width_multiplier;
  return std::max(1, static_cast<int>(std::llround(w)));
}

void NetworkConfig::validate() const {
  if (block_size <= 0 || block_size % kTimeStride != 0) {
    throw ConfigError("block size must be a positive multiple of " +
                      std::to_string(kTimeStride) + ", got " +
                      std::to_string(block_size));
  }
  if (feature_channels <= 0) {
    throw ConfigError("feature channel count must be positive");
  }
  if (!(width_multiplier > 0.0)) {
    throw ConfigError("width multiplier must be positive");
  }
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) {
    throw ConfigError("leaky slope must be in (0, 1)");
  }
}

namespace {

ConvLayerSpec conv_spec(int in_ch, int out_ch, int stride, Activation act,
                        double slope) {
  ConvLayerSpec spec;
  spec.in_channels = in_ch;
  spec.out_channels = out_ch;
  spec.kernel_size = 3;
  spec.stride = stride;
  spec.activation = act;
  spec.leaky_slope = slope;
  return spec;
}

}  // namespace

Generator::Generator(const NetworkConfig& cfg, int cond_channels, Rng& rng)
    : cfg_(cfg), cond_channels_(cond_channels) {
  cfg_.validate();
  if (cond_channels_ <= 0) {
    throw ConfigError("generator conditioning channel count must be positive");
  }
  encoder_.reserve(kUnetDepth);
  int in_ch = cond_channels_;
  for (int i = 0; i < kUnetDepth; ++i) {
    const int out_ch = cfg_.scaled_width(i);
    encoder_.emplace_back(
        conv_spec(in_ch, out_ch, 2, Activation::kRelu, cfg_.leaky_slope), rng);
    in_ch = out_ch;
  }
  // Decoder stage i consumes the upsampled previous stage concatenated with
  // encoder activation (kUnetDepth-2-i); the last stage has no skip and
  // emits the feature channels through tanh.
  decoder_.reserve(kUnetDepth);
  int prev_ch = cfg_.scaled_width(kUnetDepth - 1);
  for (int i = 0; i < kUnetDepth; ++i) {
    const bool last = i == kUnetDepth - 1;
    const int skip_ch = last ? 0 : cfg_.scaled_width(kUnetDepth - 2 - i);
    const int out_ch =
        last ? cfg_.feature_channels : cfg_.scaled_width(kUnetDepth - 2 - i);
    decoder_.emplace_back(
        conv_spec(prev_ch + skip_ch, out_ch, 1,
                  last ? Activation::kTanh : Activation::kRelu,
                  cfg_.leaky_slope),
        rng);
    prev_ch = out_ch;
  }
}

Var Generator::forward(const Var& cond) const {
  std::array<double, kUnetDepth - 1> gains;
  gains.fill(1.0);
  return forward_with_skip_gains(cond, gains);
}

Var Generator::forward_with_skip_gains(
    const Var& cond, const std::array<double, kUnetDepth - 1>& gains) const {
  const Tensor& in = cond.value();
  const int time_axis = in.rank() - 1;
  const std::int64_t frames = in.dim(time_axis);
  if (frames != cfg_.block_size) {
    throw ShapeError("generator input time axis must be the block size " +
                     std::to_string(cfg_.block_size) + ", got " +
                     std::to_string(frames));
  }
  std::vector<Var> skips;
  skips.reserve(kUnetDepth);
  Var h = cond;
  for (const Conv1dLayer& layer : encoder_) {
    h = layer.forward(h);
    skips.push_back(h);
  }
  Var d = skips.back();
  for (int i = 0; i < kUnetDepth; ++i) {
    d = upsample_linear(d, 2);
    if (i < kUnetDepth - 1) {
      Var skip = skips[static_cast<size_t>(kUnetDepth - 2 - i)];
      const double gain = gains[static_cast<size_t>(i)];
      if (gain != 1.0) skip = scale(skip, gain);
      d = concat_channels({d, skip});
    }
    d = decoder_[static_cast<size_t>(i)].forward(d);
  }
  return d;
}

std::vector<Var> Generator::parameters() const {
  std::vector<Var> params;
  for (const Conv1dLayer& l : encoder_) {
    for (const Var& p : l.parameters()) params.push_back(p);
  }
  for (const Conv1dLayer& l : decoder_) {
    for (const Var& p : l.parameters()) params.push_back(p);
  }
  return params;
}

std::int64_t Generator::parameter_count() const {
  std::int64_t n = 0;
  for (const ConvLayerSpec& s : layer_specs()) n += s.parameter_count();
  return n;
}

std::vector<ConvLayerSpec> Generator::layer_specs() const {
  std::vector<ConvLayerSpec> specs;
  for (const Conv1dLayer& l : encoder_) specs.push_back(l.spec());
  for (const Conv1dLayer& l : decoder_) specs.push_back(l.spec());
  return specs;
}

Critic::Critic(const NetworkConfig& cfg, int in_channels, Rng& rng)
    : cfg_(cfg), in_channels_(in_channels) {
  cfg_.validate();
  if (in_channels_ <= 0) {
    throw ConfigError("critic input channel count must be positive");
  }
  layers_.reserve(kUnetDepth);
  int in_ch = in_channels_;
  for (int i = 0; i < kUnetDepth; ++i) {
    const int out_ch = cfg_.scaled_width(i);
    layers_.emplace_back(
        conv_spec(in_ch, out_ch, 2, Activation::kLeakyRelu, cfg_.leaky_slope),
        rng);
    in_ch = out_ch;
  }
  const std::int64_t head_in =
      static_cast<std::int64_t>(in_ch) * (cfg_.block_size / kTimeStride);
  const double bound = std::sqrt(1.0 / static_cast<double>(head_in));
  Tensor w({head_in});
  for (double& v : w.values()) v = rng.uniform(-bound, bound);
  head_weight_ = make_parameter(std::move(w));
  head_bias_ = make_parameter(Tensor({1}));
}

Var Critic::forward(const Var& input) const {
  const Tensor& in = input.value();
  const bool batched = in.rank() == 3;
  const std::int64_t frames = batched ? in.dim(2) : in.dim(1);
  if (frames != cfg_.block_size) {
    throw ShapeError("critic input time axis must be the block size " +
                     std::to_string(cfg_.block_size) + ", got " +
                     std::to_string(frames));
  }
  Var h = input;
  if (!batched) h = reshape(h, {1, in.dim(0), in.dim(1)});
  for (const Conv1dLayer& layer : layers_) h = layer.forward(h);
  return row_dot(flatten_rows(h), head_weight_, head_bias_);
}

std::vector<Var> Critic::parameters() const {
  std::vector<Var> params;
  for (const Conv1dLayer& l : layers_) {
    for (const Var& p : l.parameters()) params.push_back(p);
  }
  params.push_back(head_weight_);
  params.push_back(head_bias_);
  return params;
}

std::int64_t Critic::parameter_count() const {
  std::int64_t n = 0;
  for (const ConvLayerSpec& s : layer_specs()) n += s.parameter_count();
  return n + head_weight_.value().size() + 1;
}

std::vector<ConvLayerSpec> Critic::layer_specs() const {
  std::vector<ConvLayerSpec> specs;
  for (const Conv1dLayer& l : layers_) specs.push_back(l.spec());
  return specs;
}

Var critic_score(const Critic& critic, const Var& block, const Var& cond) {
  const Tensor& b = block.value();
  const Tensor& c = cond.value();
  if (b.rank() != c.rank()) {
    throw ShapeError("critic_score: block rank " + std::to_string(b.rank()) +
                     " != conditioning rank " + std::to_string(c.rank()));
  }
  const int time_axis = b.rank() - 1;
  if (b.dim(time_axis) != c.dim(time_axis)) {
    throw ShapeError("critic_score: block time axis " +
                     std::to_string(b.dim(time_axis)) +
                     " != conditioning time axis " +
                     std::to_string(c.dim(time_axis)));
  }
  return critic.forward(concat_channels({block, cond}));
}

}  // namespace voxsynth
