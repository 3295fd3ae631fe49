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

#include "voxsynth/layers.hpp"
#include "voxsynth/rng.hpp"
#include "voxsynth/tensor.hpp"

namespace voxsynth {

// Frame-level annotations for one track: a phoneme id and an f0 value per
// frame, plus the singer identity. f0 of 0 Hz marks an unvoiced frame.
struct FrameAnnotations {
  std::vector<int> phoneme_ids;
  std::vector<double> f0_hz;
  int singer_id = 0;
  double frame_hop_ms = 5.0;

  std::int64_t frames() const {
    return static_cast<std::int64_t>(phoneme_ids.size());
  }
};

// One-hot phoneme encoding, [vocab_size, T], exactly one 1 per column.
Tensor encode_phonemes(const std::vector<int>& phoneme_ids, int vocab_size);

// Singer one-hot broadcast along time, [vocab_size, frames].
Tensor encode_singer(int singer_id, int vocab_size, std::int64_t frames);

// Log-scale affine map of voiced f0 onto [-1, 1]; unvoiced frames map to -1.
// Returns [1, T]. Voiced values outside [f0_min, f0_max] are range errors.
Tensor normalize_f0(const std::vector<double>& f0_hz, double f0_min,
                    double f0_max);

// 1 for voiced frames, 0 for unvoiced, [1, T]. Appended to the normalized
// f0 channel so a low pitch is distinguishable from silence.
Tensor voiced_flags(const std::vector<double>& f0_hz);

// Pitch-shift voiced frames by a number of semitones, clamping the result
// into [f0_min, f0_max]. Unvoiced frames stay at 0.
std::vector<double> transpose_f0(const std::vector<double>& f0_hz,
                                 int semitones, double f0_min, double f0_max);

// Annotations extended to at least `frames` by replicating the last frame.
FrameAnnotations pad_annotations(const FrameAnnotations& ann,
                                 std::int64_t frames);

struct ConditioningConfig {
  int phoneme_vocab = 0;
  int singer_vocab = 0;
  int proj_channels = 16;   // width of each learned 1x1 projection
  int noise_channels = 4;
  double f0_min = 0.0;
  double f0_max = 0.0;

  void validate() const;
};

// Pre-projection conditioning parts for one window of N frames.
struct RawConditioning {
  Tensor phoneme;  // [P, N] one-hot
  Tensor f0;       // [2, N] normalized f0 + voiced flag
  Tensor singer;   // [S, N] one-hot broadcast
  Tensor noise;    // [Cz, N] uniform in [-1, 1]
};

RawConditioning make_raw_conditioning(const FrameAnnotations& ann,
                                      std::int64_t start,
                                      std::int64_t block_size,
                                      const ConditioningConfig& cfg, Rng& rng);

// The assembled generator input for one window: learned projections of the
// three annotation parts plus the raw noise, concatenated along channels.
struct ConditioningBlock {
  Tensor projected_phoneme;  // [Cp, N]
  Tensor projected_f0;       // [Cf, N]
  Tensor projected_singer;   // [Cs, N]
  Tensor noise;              // [Cz, N]
  Tensor concatenated;       // [Cp+Cf+Cs+Cz, N]
};

// Owns the three 1x1 projection layers. Their parameters are trained jointly
// with the generator.
class ConditioningEncoder {
 public:
  ConditioningEncoder(const ConditioningConfig& cfg, Rng& rng);

  const ConditioningConfig& config() const { return cfg_; }
  // Channel count of the concatenated stack: 3 * proj_channels + noise.
  int out_channels() const;

  // Graph path used in training; parts may be batched [B, *, N].
  Var project(const Var& phoneme, const Var& f0, const Var& singer,
              const Var& noise) const;

  // Plain-value path for a single window [start, start + block_size), which
  // must lie inside the annotations.
  ConditioningBlock assemble_block(const FrameAnnotations& ann,
                                   std::int64_t start, std::int64_t block_size,
                                   Rng& noise_rng) const;

  std::vector<Var> parameters() const;

 private:
  ConditioningConfig cfg_;
  Conv1dLayer proj_phoneme_, proj_f0_, proj_singer_;
};

}  // namespace voxsynth
