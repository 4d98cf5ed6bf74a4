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

#ifndef EUQ_NN_ACTIVATION_HPP_
#define EUQ_NN_ACTIVATION_HPP_

#include <cmath>
#include <string>

#include "euq/errors.hpp"

namespace euq::nn {

enum class Activation { kRelu, kTanh, kLinear };

inline double activate(Activation a, double z) {
  switch (a) {
    case Activation::kRelu: return z > 0.0 ? z : 0.0;
    case Activation::kTanh: return std::tanh(z);
    case Activation::kLinear: return z;
  }
  return z;
}

// Derivative expressed through the activation output y = act(z).
inline double activate_grad_from_output(Activation a, double y) {
  switch (a) {
    case Activation::kRelu: return y > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh: return 1.0 - y * y;
    case Activation::kLinear: return 1.0;
  }
  return 1.0;
}

inline std::string to_string(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kLinear: return "linear";
  }
  return "?";
}

inline Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::kRelu;
  if (s == "tanh") return Activation::kTanh;
  if (s == "linear") return Activation::kLinear;
  throw ValidationError("unknown activation: " + s);
}

}  // namespace euq::nn

#endif  // EUQ_NN_ACTIVATION_HPP_
