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
#include "voxsynth/optim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "voxsynth/errors.hpp"

namespace voxsynth {

RmsProp::RmsProp(std::vector<Var> params, double learning_rate, double decay,
                 double epsilon)
    : params_(std::move(params)),
      learning_rate_(learning_rate),
      decay_(decay),
      epsilon_(epsilon) {
  if (learning_rate_ <= 0.0) {
    throw ConfigError("rmsprop learning rate must be positive");
  }
  if (!(decay_ > 0.0 && decay_ < 1.0)) {
    throw ConfigError("rmsprop decay must be in (0, 1)");
  }
  if (epsilon_ <= 0.0) {
    throw ConfigError("rmsprop epsilon must be positive");
  }
  mean_square_.reserve(params_.size());
  for (const Var& p : params_) {
    mean_square_.emplace_back(p.value().shape());
  }
}

void RmsProp::step() {
  for (size_t i = 0; i < params_.size(); ++i) {
    Var& p = const_cast<Var&>(params_[i]);
    if (!p.has_grad()) {
      throw ContractError("rmsprop: parameter " + std::to_string(i) +
                          " has no gradient; run backward first");
    }
    const double* g = p.grad().data();
    double* ms = mean_square_[i].data();
    double* v = p.value().data();
    const std::int64_t n = p.value().size();
    for (std::int64_t k = 0; k < n; ++k) {
      ms[k] = decay_ * ms[k] + (1.0 - decay_) * g[k] * g[k];
      v[k] -= learning_rate_ * g[k] / std::sqrt(ms[k] + epsilon_);
    }
  }
}

void clip_tensor(Tensor& t, double bound) {
  if (bound <= 0.0) {
    throw ConfigError("clip bound must be positive, got " +
                      std::to_string(bound));
  }
  for (double& v : t.values()) v = std::clamp(v, -bound, bound);
}

void clip_params(const std::vector<Var>& params, double bound) {
  for (const Var& p : params) {
    Var v = p;
    clip_tensor(v.value(), bound);
  }
}

}  // namespace voxsynth
