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

#include <vector>

#include "voxsynth/autodiff.hpp"

namespace voxsynth {

// RMSProp over a fixed parameter list:
//   mean_square <- decay * mean_square + (1 - decay) * grad^2
//   param      <- param - lr * grad / sqrt(mean_square + epsilon)
class RmsProp {
 public:
  RmsProp(std::vector<Var> params, double learning_rate, double decay = 0.9,
          double epsilon = 1e-8);

  // One update from the parameters' current gradients. A parameter whose
  // gradient buffer was never populated is a contract violation.
  void step();

  const std::vector<Var>& params() const { return params_; }
  // Per-parameter accumulators, aligned with params(). Exposed for
  // checkpointing.
  std::vector<Tensor>& mean_square() { return mean_square_; }
  const std::vector<Tensor>& mean_square() const { return mean_square_; }

  double learning_rate() const { return learning_rate_; }
  double decay() const { return decay_; }
  double epsilon() const { return epsilon_; }

 private:
  std::vector<Var> params_;
  std::vector<Tensor> mean_square_;
  double learning_rate_, decay_, epsilon_;
};

// Clamp every parameter entry into [-bound, +bound]. Idempotent.
void clip_params(const std::vector<Var>& params, double bound);
void clip_tensor(Tensor& t, double bound);

}  // namespace voxsynth
