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
#include "voxsynth/conditioning.hpp"

#include <cmath>
#include <string>

#include "voxsynth/errors.hpp"

namespace voxsynth {

Tensor encode_phonemes(const std::vector<int>& phoneme_ids, int vocab_size) {
  if (vocab_size <= 0) {
    throw ConfigError("phoneme vocab size must be positive");
  }
  const std::int64_t frames = static_cast<std::int64_t>(phoneme_ids.size());
  if (frames == 0) throw ShapeError("encode_phonemes: empty id sequence");
  Tensor out({vocab_size, frames});
  for (std::int64_t t = 0; t < frames; ++t) {
    const int id = phoneme_ids[static_cast<size_t>(t)];
    if (id < 0 || id >= vocab_size) {
      throw VocabError("phoneme id " + std::to_string(id) + " at frame " +
                       std::to_string(t) + " outside vocabulary [0, " +
                       std::to_string(vocab_size) + ")");
    }
    out.at(id, t) = 1.0;
  }
  return out;
}

Tensor encode_singer(int singer_id, int vocab_size, std::int64_t frames) {
  if (vocab_size <= 0) throw ConfigError("singer vocab size must be positive");
  if (frames <= 0) throw ShapeError("encode_singer: frame count must be positive");
  if (singer_id < 0 || singer_id >= vocab_size) {
    throw VocabError("singer id " + std::to_string(singer_id) +
                     " outside vocabulary [0, " + std::to_string(vocab_size) +
                     ")");
  }
  Tensor out({vocab_size, frames});
  for (std::int64_t t = 0; t < frames; ++t) out.at(singer_id, t) = 1.0;
  return out;
}

Tensor normalize_f0(const std::vector<double>& f0_hz, double f0_min,
                    double f0_max) {
  if (!(f0_min > 0.0) || !(f0_max > f0_min)) {
    throw ConfigError("f0 range must satisfy 0 < f0_min < f0_max, got [" +
                      std::to_string(f0_min) + ", " + std::to_string(f0_max) +
                      "]");
  }
  const std::int64_t frames = static_cast<std::int64_t>(f0_hz.size());
  if (frames == 0) throw ShapeError("normalize_f0: empty f0 sequence");
  const double log_min = std::log(f0_min);
  const double inv_span = 1.0 / (std::log(f0_max) - log_min);
  Tensor out({1, frames});
  for (std::int64_t t = 0; t < frames; ++t) {
    const double f0 = f0_hz[static_cast<size_t>(t)];
    if (f0 == 0.0) {
      out[t] = -1.0;  // unvoiced
      continue;
    }
    if (f0 < f0_min || f0 > f0_max) {
      throw RangeError("voiced f0 " + std::to_string(f0) + " Hz at frame " +
                       std::to_string(t) + " outside declared range [" +
                       std::to_string(f0_min) + ", " + std::to_string(f0_max) +
                       "]");
    }
    out[t] = 2.0 * (std::log(f0) - log_min) * inv_span - 1.0;
  }
  return out;
}

Tensor voiced_flags(const std::vector<double>& f0_hz) {
  const std::int64_t frames = static_cast<std::int64_t>(f0_hz.size());
  if (frames == 0) throw ShapeError("voiced_flags: empty f0 sequence");
  Tensor out({1, frames});
  for (std::int64_t t = 0; t < frames; ++t) {
    out[t] = f0_hz[static_cast<size_t>(t)] > 0.0 ? 1.0 : 0.0;
  }
  return out;
}

std::vector<double> transpose_f0(const std::vector<double>& f0_hz,
                                 int semitones, double f0_min, double f0_max) {
  const double factor = std::pow(2.0, semitones / 12.0);
  std::vector<double> out(f0_hz.size());
  for (size_t t = 0; t < f0_hz.size(); ++t) {
    if (f0_hz[t] == 0.0) {
      out[t] = 0.0;
    } else {
      out[t] = std::clamp(f0_hz[t] * factor, f0_min, f0_max);
    }
  }
  return out;
}

FrameAnnotations pad_annotations(const FrameAnnotations& ann,
                                 std::int64_t frames) {
  if (ann.frames() == 0) {
    throw ShapeError("pad_annotations: empty annotations");
  }
  FrameAnnotations out = ann;
  while (out.frames() < frames) {
    out.phoneme_ids.push_back(out.phoneme_ids.back());
    out.f0_hz.push_back(out.f0_hz.back());
  }
  return out;
}

void ConditioningConfig::validate() const {
  if (phoneme_vocab <= 0 || singer_vocab <= 0) {
    throw ConfigError("conditioning vocab sizes must be positive");
  }
  if (proj_channels <= 0 || noise_channels <= 0) {
    throw ConfigError("conditioning channel widths must be positive");
  }
  if (!(f0_min > 0.0) || !(f0_max > f0_min)) {
    throw ConfigError("conditioning f0 range must satisfy 0 < min < max");
  }
}

RawConditioning make_raw_conditioning(const FrameAnnotations& ann,
                                      std::int64_t start,
                                      std::int64_t block_size,
                                      const ConditioningConfig& cfg,
                                      Rng& rng) {
  cfg.validate();
  if (start < 0 || start + block_size > ann.frames()) {
    throw RangeError("conditioning window [" + std::to_string(start) + ", " +
                     std::to_string(start + block_size) +
                     ") outside annotations of " +
                     std::to_string(ann.frames()) + " frames");
  }
  const size_t s = static_cast<size_t>(start);
  const size_t n = static_cast<size_t>(block_size);
  std::vector<int> ids(ann.phoneme_ids.begin() + s,
                       ann.phoneme_ids.begin() + s + n);
  std::vector<double> f0(ann.f0_hz.begin() + s, ann.f0_hz.begin() + s + n);

  RawConditioning raw;
  raw.phoneme = encode_phonemes(ids, cfg.phoneme_vocab);
  Tensor norm = normalize_f0(f0, cfg.f0_min, cfg.f0_max);
  Tensor flags = voiced_flags(f0);
  raw.f0 = Tensor({2, block_size});
  for (std::int64_t t = 0; t < block_size; ++t) {
    raw.f0.at(0, t) = norm[t];
    raw.f0.at(1, t) = flags[t];
  }
  raw.singer = encode_singer(ann.singer_id, cfg.singer_vocab, block_size);
  raw.noise = Tensor({cfg.noise_channels, block_size});
  for (double& v : raw.noise.values()) v = rng.uniform(-1.0, 1.0);
  return raw;
}

namespace {

ConvLayerSpec projection_spec(int in_channels, int out_channels) {
  ConvLayerSpec spec;
  spec.in_channels = in_channels;
  spec.out_channels = out_channels;
  spec.kernel_size = 1;
  spec.stride = 1;
  spec.activation = Activation::kIdentity;
  return spec;
}

const ConditioningConfig& validated(const ConditioningConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

ConditioningEncoder::ConditioningEncoder(const ConditioningConfig& cfg,
                                         Rng& rng)
    : cfg_(validated(cfg)),
      proj_phoneme_(projection_spec(cfg.phoneme_vocab, cfg.proj_channels),
                    rng),
      proj_f0_(projection_spec(2, cfg.proj_channels), rng),
      proj_singer_(projection_spec(cfg.singer_vocab, cfg.proj_channels), rng) {}

int ConditioningEncoder::out_channels() const {
  return 3 * cfg_.proj_channels + cfg_.noise_channels;
}

Var ConditioningEncoder::project(const Var& phoneme, const Var& f0,
                                 const Var& singer, const Var& noise) const {
  return concat_channels({proj_phoneme_.forward(phoneme),
                          proj_f0_.forward(f0), proj_singer_.forward(singer),
                          noise});
}

ConditioningBlock ConditioningEncoder::assemble_block(
    const FrameAnnotations& ann, std::int64_t start, std::int64_t block_size,
    Rng& noise_rng) const {
  RawConditioning raw =
      make_raw_conditioning(ann, start, block_size, cfg_, noise_rng);
  ConditioningBlock block;
  block.projected_phoneme =
      proj_phoneme_.forward(make_constant(raw.phoneme)).value();
  block.projected_f0 = proj_f0_.forward(make_constant(raw.f0)).value();
  block.projected_singer =
      proj_singer_.forward(make_constant(raw.singer)).value();
  block.noise = raw.noise;
  block.concatenated =
      concat_channels({make_constant(block.projected_phoneme),
                       make_constant(block.projected_f0),
                       make_constant(block.projected_singer),
                       make_constant(block.noise)})
          .value();
  return block;
}

std::vector<Var> ConditioningEncoder::parameters() const {
  std::vector<Var> params;
  for (const Conv1dLayer* layer :
       {&proj_phoneme_, &proj_f0_, &proj_singer_}) {
    for (const Var& p : layer->parameters()) params.push_back(p);
  }
  return params;
}

}  // namespace voxsynth
