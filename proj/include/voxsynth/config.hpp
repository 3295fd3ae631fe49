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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace voxsynth {

enum class ReconNorm { kL1, kL2 };

// Every scalar a training run depends on. Values not taken from the flat
// key=value config file fall back to the defaults below.
struct TrainingConfig {
  double lambda_recon = 0.0005;
  double learning_rate = 0.0001;
  int epochs = 3000;
  int block_size = 128;
  double clip_bound = 0.01;   // critic weight clamp
  int critic_steps = 5;       // critic updates per generator update
  int batch_size = 16;
  std::uint64_t seed = 42;
  double width_multiplier = 1.0;
  double rmsprop_decay = 0.9;
  double rmsprop_epsilon = 1e-8;
  int checkpoint_interval = 50;  // epochs between numbered snapshots
  ReconNorm recon_norm = ReconNorm::kL1;
  int proj_channels = 16;
  int noise_channels = 4;
  double leaky_slope = 0.2;

  void validate() const;

  // Sorted key=value lines; the canonical form hashed into checkpoints.
  std::string canonical_text() const;

  // Unknown keys and malformed values are config errors.
  static TrainingConfig from_key_values(
      const std::map<std::string, std::string>& kv);
};

// A TrainingConfig plus the corpus-derived facts needed to rebuild the
// networks from a checkpoint alone.
struct RunProfile {
  TrainingConfig train;
  int phoneme_vocab = 0;
  int singer_vocab = 0;
  int feature_channels = 64;
  double f0_min = 0.0;
  double f0_max = 0.0;

  std::string canonical_text() const;
  static RunProfile parse(const std::string& text);

  // Key-by-key comparison ignoring `epochs`, which may legitimately differ
  // between the run that wrote a checkpoint and the run resuming from it.
  // Returns the names of differing keys.
  std::vector<std::string> diff_ignoring_epochs(const RunProfile& other) const;
};

std::uint64_t fnv1a64(const std::string& text);

// Flat key=value file; blank lines and '#' comments are ignored.
std::map<std::string, std::string> parse_key_value_file(
    const std::filesystem::path& path);

// Apply "key=value" strings on top of file values.
void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& overrides);

}  // namespace voxsynth
