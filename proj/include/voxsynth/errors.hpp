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

#include <stdexcept>
#include <string>

namespace voxsynth {

// Base class for every error thrown by the library. The CLI maps these to
// exit codes: NumericError -> 2, everything else -> 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor or layer dimension mismatch. Messages name the offending axis.
class ShapeError : public Error {
  using Error::Error;
};

// Invalid configuration value (bad block size, non-positive rate, ...).
class ConfigError : public Error {
  using Error::Error;
};

// Id outside a declared vocabulary.
class VocabError : public Error {
  using Error::Error;
};

// Value outside its declared numeric range, or an out-of-bounds window.
class RangeError : public Error {
  using Error::Error;
};

// Malformed file content. Messages carry the line number where possible.
class ParseError : public Error {
  using Error::Error;
};

// Filesystem failure. Messages carry the path.
class IoError : public Error {
  using Error::Error;
};

// Non-finite value where a finite one is required (diverged training, ...).
class NumericError : public Error {
  using Error::Error;
};

// API misuse: backward on a non-scalar, optimizer step without gradients.
class ContractError : public Error {
  using Error::Error;
};

}  // namespace voxsynth
