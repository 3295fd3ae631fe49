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
#include "voxsynth/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "voxsynth/errors.hpp"

namespace voxsynth {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw ConfigError("config key '" + key + "': cannot parse '" + text +
                      "' as a real number");
  }
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    throw ConfigError("config key '" + key + "': cannot parse '" + text +
                      "' as an integer");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    throw ConfigError("config key '" + key + "': cannot parse '" + text +
                      "' as an unsigned integer");
  }
  return v;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> training_kv(const TrainingConfig& c) {
  return {
      {"lambda_recon", fmt_double(c.lambda_recon)},
      {"learning_rate", fmt_double(c.learning_rate)},
      {"epochs", std::to_string(c.epochs)},
      {"block_size", std::to_string(c.block_size)},
      {"clip_bound", fmt_double(c.clip_bound)},
      {"critic_steps", std::to_string(c.critic_steps)},
      {"batch_size", std::to_string(c.batch_size)},
      {"seed", std::to_string(c.seed)},
      {"width_multiplier", fmt_double(c.width_multiplier)},
      {"rmsprop_decay", fmt_double(c.rmsprop_decay)},
      {"rmsprop_epsilon", fmt_double(c.rmsprop_epsilon)},
      {"checkpoint_interval", std::to_string(c.checkpoint_interval)},
      {"recon_norm", c.recon_norm == ReconNorm::kL1 ? "l1" : "l2"},
      {"proj_channels", std::to_string(c.proj_channels)},
      {"noise_channels", std::to_string(c.noise_channels)},
      {"leaky_slope", fmt_double(c.leaky_slope)},
  };
}

std::string render_kv(const std::map<std::string, std::string>& kv) {
  std::ostringstream os;
  for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
  return os.str();
}

}  // namespace

void TrainingConfig::validate() const {
  if (!(lambda_recon >= 0.0)) {
    throw ConfigError("lambda_recon must be non-negative");
  }
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (block_size <= 0 || block_size % 32 != 0) {
    throw ConfigError("block_size must be a positive multiple of 32, got " +
                      std::to_string(block_size));
  }
  if (!(clip_bound > 0.0)) throw ConfigError("clip_bound must be positive");
  if (critic_steps <= 0) throw ConfigError("critic_steps must be positive");
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (!(width_multiplier > 0.0)) {
    throw ConfigError("width_multiplier must be positive");
  }
  if (!(rmsprop_decay > 0.0 && rmsprop_decay < 1.0)) {
    throw ConfigError("rmsprop_decay must be in (0, 1)");
  }
  if (!(rmsprop_epsilon > 0.0)) {
    throw ConfigError("rmsprop_epsilon must be positive");
  }
  if (checkpoint_interval <= 0) {
    throw ConfigError("checkpoint_interval must be positive");
  }
  if (proj_channels <= 0 || noise_channels <= 0) {
    throw ConfigError("projection and noise channel counts must be positive");
  }
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) {
    throw ConfigError("leaky_slope must be in (0, 1)");
  }
}

std::string TrainingConfig::canonical_text() const {
  return render_kv(training_kv(*this));
}

TrainingConfig TrainingConfig::from_key_values(
    const std::map<std::string, std::string>& kv) {
  TrainingConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "lambda_recon") c.lambda_recon = parse_double(key, value);
    else if (key == "learning_rate") c.learning_rate = parse_double(key, value);
    else if (key == "epochs") c.epochs = static_cast<int>(parse_int(key, value));
    else if (key == "block_size") c.block_size = static_cast<int>(parse_int(key, value));
    else if (key == "clip_bound") c.clip_bound = parse_double(key, value);
    else if (key == "critic_steps") c.critic_steps = static_cast<int>(parse_int(key, value));
    else if (key == "batch_size") c.batch_size = static_cast<int>(parse_int(key, value));
    else if (key == "seed") c.seed = parse_uint(key, value);
    else if (key == "width_multiplier") c.width_multiplier = parse_double(key, value);
    else if (key == "rmsprop_decay") c.rmsprop_decay = parse_double(key, value);
    else if (key == "rmsprop_epsilon") c.rmsprop_epsilon = parse_double(key, value);
    else if (key == "checkpoint_interval") c.checkpoint_interval = static_cast<int>(parse_int(key, value));
    else if (key == "recon_norm") {
      if (value == "l1") c.recon_norm = ReconNorm::kL1;
      else if (value == "l2") c.recon_norm = ReconNorm::kL2;
      else throw ConfigError("recon_norm must be 'l1' or 'l2', got '" + value + "'");
    }
    else if (key == "proj_channels") c.proj_channels = static_cast<int>(parse_int(key, value));
    else if (key == "noise_channels") c.noise_channels = static_cast<int>(parse_int(key, value));
    else if (key == "leaky_slope") c.leaky_slope = parse_double(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

std::string RunProfile::canonical_text() const {
  std::map<std::string, std::string> kv = training_kv(train);
  kv["phoneme_vocab"] = std::to_string(phoneme_vocab);
  kv["singer_vocab"] = std::to_string(singer_vocab);
  kv["feature_channels"] = std::to_string(feature_channels);
  kv["f0_min"] = fmt_double(f0_min);
  kv["f0_max"] = fmt_double(f0_max);
  return render_kv(kv);
}

RunProfile RunProfile::parse(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("run profile line without '=': '" + line + "'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  RunProfile p;
  std::map<std::string, std::string> training_keys;
  for (const auto& [key, value] : kv) {
    if (key == "phoneme_vocab") p.phoneme_vocab = static_cast<int>(parse_int(key, value));
    else if (key == "singer_vocab") p.singer_vocab = static_cast<int>(parse_int(key, value));
    else if (key == "feature_channels") p.feature_channels = static_cast<int>(parse_int(key, value));
    else if (key == "f0_min") p.f0_min = parse_double(key, value);
    else if (key == "f0_max") p.f0_max = parse_double(key, value);
    else training_keys[key] = value;
  }
  p.train = TrainingConfig::from_key_values(training_keys);
  return p;
}

std::vector<std::string> RunProfile::diff_ignoring_epochs(
    const RunProfile& other) const {
  std::istringstream a(canonical_text()), b(other.canonical_text());
  std::map<std::string, std::string> ka, kb;
  std::string line;
  while (std::getline(a, line)) {
    const size_t eq = line.find('=');
    if (eq != std::string::npos) ka[line.substr(0, eq)] = line.substr(eq + 1);
  }
  while (std::getline(b, line)) {
    const size_t eq = line.find('=');
    if (eq != std::string::npos) kb[line.substr(0, eq)] = line.substr(eq + 1);
  }
  std::vector<std::string> diff;
  for (const auto& [k, v] : ka) {
    if (k == "epochs") continue;
    auto it = kb.find(k);
    if (it == kb.end() || it->second != v) diff.push_back(k);
  }
  for (const auto& [k, v] : kb) {
    if (k == "epochs") continue;
    if (ka.find(k) == ka.end()) diff.push_back(k);
  }
  return diff;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::map<std::string, std::string> parse_key_value_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) eq = line.find(' ');
    if (eq == std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected 'key=value' or 'key value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": empty key or value");
    }
    kv[key] = value;
  }
  return kv;
}

void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) {
    const size_t eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override must look like key=value, got '" + o + "'");
    }
    kv[trim(o.substr(0, eq))] = trim(o.substr(eq + 1));
  }
}

}  // namespace voxsynth
