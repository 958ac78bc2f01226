// Copyright 2026 The qrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrep {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// key = value configuration, one assignment per line, '#' comments.
/// Keys are validated against the consumer's allowed set: a typo is an error,
/// never a silently ignored knob.
class Config {
 public:
  Config() = default;
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  uint64_t get_u64(const std::string& key, uint64_t fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;

  /// Throws ConfigError naming the first key outside `allowed`.
  void require_known_keys(const std::set<std::string>& allowed) const;

  /// Canonical sorted "key=value" text; input for the config hash.
  std::string canonical_text() const;

  /// FNV-1a 64-bit hash of canonical_text(), hex-encoded.
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace qrep
