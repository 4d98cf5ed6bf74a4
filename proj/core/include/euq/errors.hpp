// Copyright 2026 The EUQ Authors.
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

#ifndef EUQ_ERRORS_HPP_
#define EUQ_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace euq {

// Invalid domain object (bad network spec, out-of-range config, ...).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Non-finite values encountered during numeric evaluation.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, int layer_index = -1)
      : std::runtime_error(what), layer_index_(layer_index) {}
  // Index of the offending layer, -1 when not attributable.
  int layer_index() const { return layer_index_; }

 private:
  int layer_index_;
};

// Corrupt or mismatched files (snapshots, masks, checkpoints, catalogs).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration supplied by the user.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace euq

#endif  // EUQ_ERRORS_HPP_
