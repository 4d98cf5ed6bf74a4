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

#include "euq/nn/train.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "euq/errors.hpp"
#include "euq/rng.hpp"

namespace euq::nn {

namespace {

double validation_nll(const Network& net, const Dataset& set) {
  return nll_loss(forward_gaussian(net, set.inputs), set.targets);
}

void write_u64_le(std::ostream& os, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64_le(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_f64_le(std::ostream& os, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  write_u64_le(os, bits);
}

double read_f64_le(std::istream& is) {
  const std::uint64_t bits = read_u64_le(is);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace

void validate(const TrainingConfig& cfg) {
  if (cfg.learning_rate < 1e-4 || cfg.learning_rate > 1e-1) {
    throw ValidationError("learning rate outside [1e-4, 1e-1]");
  }
  if (cfg.batch_size < 32 || cfg.batch_size > 256) {
    throw ValidationError("batch size outside [32, 256]");
  }
  if (cfg.plateau_patience <= 0 || cfg.early_stop_patience <= 0 || cfg.max_epochs <= 0) {
    throw ValidationError("patience and max epochs must be positive");
  }
  if (cfg.lr_factor <= 0.0 || cfg.lr_factor >= 1.0) {
    throw ValidationError("LR reduction factor must lie in (0, 1)");
  }
}

TrainResult train(const Network& net, const Dataset& train_set, const Dataset& valid_set,
                  const TrainingConfig& cfg) {
  validate(cfg);
  if (train_set.empty() || valid_set.empty()) {
    throw ValidationError("training and validation splits must be nonempty");
  }

  TrainResult result;
  result.network = net;
  result.best_epoch = 0;
  result.best_valid_nll = std::numeric_limits<double>::infinity();
  try {
    result.best_valid_nll = validation_nll(net, valid_set);
  } catch (const NumericError&) {
    result.diverged = true;
    return result;
  }

  Network current = net;
  Eigen::VectorXd weights = current.weights();
  OptimizerState opt = OptimizerState::init(cfg.optimizer, weights.size());
  Rng shuffle_rng(cfg.seed);

  const Eigen::Index n = train_set.size();
  const Eigen::Index batch = std::min<Eigen::Index>(cfg.batch_size, n);
  double lr = cfg.learning_rate;
  int epochs_since_improvement = 0;
  int epochs_since_lr_drop = 0;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const std::vector<std::size_t> order = shuffle_rng.permutation(static_cast<std::size_t>(n));
    double train_loss_sum = 0.0;
    Eigen::Index n_batches = 0;

    try {
      for (Eigen::Index start = 0; start < n; start += batch) {
        const Eigen::Index count = std::min(batch, n - start);
        std::vector<Sequence> xs(static_cast<std::size_t>(count));
        Eigen::MatrixXd ys(train_set.targets.rows(), count);
        for (Eigen::Index j = 0; j < count; ++j) {
          const std::size_t src = order[static_cast<std::size_t>(start + j)];
          xs[static_cast<std::size_t>(j)] = train_set.inputs[src];
          ys.col(j) = train_set.targets.col(static_cast<Eigen::Index>(src));
        }
        const LossGrad lg = grad(current, xs, ys);
        optimizer_step(weights, lg.grad, lr, opt);
        if (!weights.allFinite()) throw NumericError("non-finite weights after update");
        current.set_weights(weights);
        train_loss_sum += lg.loss;
        ++n_batches;
      }
    } catch (const NumericError&) {
      result.diverged = true;
      return result;
    }

    double valid_nll;
    try {
      valid_nll = validation_nll(current, valid_set);
    } catch (const NumericError&) {
      result.diverged = true;
      return result;
    }
    if (!std::isfinite(valid_nll)) {
      result.diverged = true;
      return result;
    }

    result.history.push_back({epoch, train_loss_sum / static_cast<double>(n_batches),
                              valid_nll, lr});

    if (valid_nll < result.best_valid_nll) {
      result.best_valid_nll = valid_nll;
      result.best_epoch = epoch;
      result.network = current;
      epochs_since_improvement = 0;
      epochs_since_lr_drop = 0;
    } else {
      ++epochs_since_improvement;
      ++epochs_since_lr_drop;
    }
    if (epochs_since_improvement >= cfg.early_stop_patience) break;
    if (epochs_since_lr_drop >= cfg.plateau_patience) {
      lr *= cfg.lr_factor;
      epochs_since_lr_drop = 0;
    }
  }
  return result;
}

void save_checkpoint(const std::filesystem::path& path, const Network& net) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open checkpoint for writing: " + path.string());
  os.write("NNW1", 4);
  write_u64_le(os, spec_hash(net.spec()));
  write_u64_le(os, static_cast<std::uint64_t>(net.parameter_count()));
  for (Eigen::Index i = 0; i < net.weights().size(); ++i) write_f64_le(os, net.weights()(i));
  if (!os) throw DataError("short write to checkpoint: " + path.string());
}

Network load_checkpoint(const std::filesystem::path& path, const NetworkSpec& spec) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "NNW1") {
    throw DataError("bad checkpoint magic in " + path.string());
  }
  const std::uint64_t hash = read_u64_le(is);
  const std::uint64_t count = read_u64_le(is);
  if (hash != spec_hash(spec)) throw DataError("checkpoint spec hash mismatch in " + path.string());
  const std::size_t expected = parameter_count(spec);
  if (count != expected) throw DataError("checkpoint parameter count mismatch in " + path.string());
  Eigen::VectorXd w(static_cast<Eigen::Index>(count));
  for (std::uint64_t i = 0; i < count; ++i) w(static_cast<Eigen::Index>(i)) = read_f64_le(is);
  if (!is) throw DataError("truncated checkpoint: " + path.string());
  return Network(spec, std::move(w));
}

}  // namespace euq::nn
