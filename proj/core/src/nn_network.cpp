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

#include "euq/nn/network.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "euq/errors.hpp"
#include "euq/rng.hpp"

namespace euq::nn {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Read-only / mutable views into the flat parameter vector, indexed by block.
struct BlockIndex {
  // per graph node (1-based); dense uses [W, b], lstm uses [Wx, Wh, b]
  std::vector<std::vector<const ParamBlock*>> layer_blocks;
  std::map<std::pair<int, int>, const ParamBlock*> skip_proj;  // (dst, src) -> block
  const ParamBlock* head_w = nullptr;
  const ParamBlock* head_b = nullptr;

  explicit BlockIndex(const NetworkSpec& spec, const ParamLayout& layout)
      : layer_blocks(spec.layers.size() + 1) {
    for (const ParamBlock& b : layout.blocks) {
      switch (b.role) {
        case ParamBlock::Role::kHeadW: head_w = &b; break;
        case ParamBlock::Role::kHeadB: head_b = &b; break;
        case ParamBlock::Role::kSkipProj: skip_proj[{b.layer, b.skip_src}] = &b; break;
        default: layer_blocks[b.layer].push_back(&b); break;
      }
    }
  }
};

Eigen::Map<const MatrixXd> view(const VectorXd& w, const ParamBlock& b) {
  return {w.data() + b.offset, b.rows, b.cols};
}

Eigen::Map<MatrixXd> view(VectorXd& w, const ParamBlock& b) {
  return {w.data() + b.offset, b.rows, b.cols};
}

struct LayerCache {
  MatrixXd combined;                 // input after skip additions, in_w x T
  MatrixXd out;                      // node value, w x T
  MatrixXd ig, fg, gg, og, c, tanhc; // lstm internals, h x T
};

struct HeadCache {
  VectorXd last;     // final step of the last node
  VectorXd raw_var;  // pre-softplus variance head
};

// Single-sample forward through the layer DAG. Caches are only filled when a
// backward pass will follow.
GaussianPrediction forward_one(const NetworkSpec& spec, const BlockIndex& idx,
                               const VectorXd& w, const Sequence& x,
                               std::vector<LayerCache>* caches, HeadCache* head_cache) {
  if (x.rows() != spec.input_dim) {
    throw ValidationError("input dimension mismatch: got " + std::to_string(x.rows()) +
                          ", spec wants " + std::to_string(spec.input_dim));
  }
  if (x.cols() < 1) throw ValidationError("input sequence is empty");

  const int n_layers = static_cast<int>(spec.layers.size());
  const Index steps = x.cols();
  std::vector<MatrixXd> values(n_layers + 1);
  values[0] = x;
  if (caches) caches->resize(n_layers + 1);

  for (int i = 1; i <= n_layers; ++i) {
    const LayerSpec& l = spec.layers[i - 1];
    MatrixXd combined = values[i - 1];
    for (const SkipEdge& e : spec.skips) {
      if (e.dst != i) continue;
      auto it = idx.skip_proj.find({e.dst, e.src});
      if (it != idx.skip_proj.end()) {
        combined.noalias() += view(w, *it->second) * values[e.src];
      } else {
        combined += values[e.src];
      }
    }

    if (l.kind == LayerKind::kIdentity) {
      values[i] = combined;
    } else if (l.kind == LayerKind::kDense) {
      const auto W = view(w, *idx.layer_blocks[i][0]);
      const auto b = view(w, *idx.layer_blocks[i][1]);
      MatrixXd z = (W * combined).colwise() + b.col(0);
      for (Index t = 0; t < z.cols(); ++t)
        for (Index r = 0; r < z.rows(); ++r) z(r, t) = activate(l.activation, z(r, t));
      values[i] = std::move(z);
    } else {  // recurrent cell
      const auto Wx = view(w, *idx.layer_blocks[i][0]);
      const auto Wh = view(w, *idx.layer_blocks[i][1]);
      const auto b = view(w, *idx.layer_blocks[i][2]);
      const int h = l.width;
      MatrixXd hs(h, steps), ig(h, steps), fg(h, steps), gg(h, steps), og(h, steps),
          cs(h, steps), tanhc(h, steps);
      VectorXd h_prev = VectorXd::Zero(h), c_prev = VectorXd::Zero(h);
      const MatrixXd zx = (Wx * combined).colwise() + b.col(0);
      for (Index t = 0; t < steps; ++t) {
        VectorXd z = zx.col(t);
        z.noalias() += Wh * h_prev;
        for (int r = 0; r < h; ++r) {
          ig(r, t) = sigmoid(z(r));
          fg(r, t) = sigmoid(z(h + r));
          gg(r, t) = std::tanh(z(2 * h + r));
          og(r, t) = sigmoid(z(3 * h + r));
          cs(r, t) = fg(r, t) * c_prev(r) + ig(r, t) * gg(r, t);
          tanhc(r, t) = std::tanh(cs(r, t));
          hs(r, t) = og(r, t) * tanhc(r, t);
        }
        h_prev = hs.col(t);
        c_prev = cs.col(t);
      }
      values[i] = hs;
      if (caches) {
        LayerCache& lc = (*caches)[i];
        lc.ig = std::move(ig); lc.fg = std::move(fg); lc.gg = std::move(gg);
        lc.og = std::move(og); lc.c = std::move(cs); lc.tanhc = std::move(tanhc);
      }
    }
    if (caches) {
      (*caches)[i].combined = std::move(combined);
      (*caches)[i].out = values[i];
    }
  }

  const VectorXd last = values[n_layers].col(values[n_layers].cols() - 1);
  const auto Hw = view(w, *idx.head_w);
  const auto Hb = view(w, *idx.head_b);
  VectorXd raw = Hw * last + Hb.col(0);
  const int d = spec.output_dim;
  GaussianPrediction pred;
  pred.mean = raw.head(d);
  pred.variance.resize(d);
  for (int k = 0; k < d; ++k) pred.variance(k) = softplus(raw(d + k)) + kVarianceFloor;
  if (!pred.mean.allFinite() || !pred.variance.allFinite()) {
    throw NumericError("non-finite network output");
  }
  if (head_cache) {
    head_cache->last = last;
    head_cache->raw_var = raw.tail(d);
  }
  if (caches) (*caches)[0].out = x;
  return pred;
}

// Reverse pass for one sample; d_mean/d_var already include the batch-mean
// normalization. Accumulates into the flat gradient.
void backward_one(const NetworkSpec& spec, const BlockIndex& idx, const VectorXd& w,
                  const std::vector<LayerCache>& caches, const HeadCache& head,
                  const VectorXd& d_mean, const VectorXd& d_var, VectorXd& grad_out) {
  const int n_layers = static_cast<int>(spec.layers.size());
  const int d = spec.output_dim;

  VectorXd d_raw(2 * d);
  d_raw.head(d) = d_mean;
  for (int k = 0; k < d; ++k) d_raw(d + k) = d_var(k) * sigmoid(head.raw_var(k));

  view(grad_out, *idx.head_w).noalias() += d_raw * head.last.transpose();
  view(grad_out, *idx.head_b).col(0) += d_raw;

  std::vector<MatrixXd> d_values(n_layers + 1);
  for (int i = 0; i <= n_layers; ++i)
    d_values[i] = MatrixXd::Zero(caches[i].out.rows(), caches[i].out.cols());
  const auto Hw = view(w, *idx.head_w);
  d_values[n_layers].col(d_values[n_layers].cols() - 1) = Hw.transpose() * d_raw;

  for (int i = n_layers; i >= 1; --i) {
    const LayerSpec& l = spec.layers[i - 1];
    const LayerCache& lc = caches[i];
    MatrixXd d_combined;

    if (l.kind == LayerKind::kIdentity) {
      d_combined = d_values[i];
    } else if (l.kind == LayerKind::kDense) {
      MatrixXd dz = d_values[i];
      for (Index t = 0; t < dz.cols(); ++t)
        for (Index r = 0; r < dz.rows(); ++r)
          dz(r, t) *= activate_grad_from_output(l.activation, lc.out(r, t));
      view(grad_out, *idx.layer_blocks[i][0]).noalias() += dz * lc.combined.transpose();
      view(grad_out, *idx.layer_blocks[i][1]).col(0) += dz.rowwise().sum();
      const auto W = view(w, *idx.layer_blocks[i][0]);
      d_combined.noalias() = W.transpose() * dz;
    } else {  // recurrent cell: backprop through time
      const auto Wx = view(w, *idx.layer_blocks[i][0]);
      const auto Wh = view(w, *idx.layer_blocks[i][1]);
      const int h = l.width;
      const Index steps = lc.out.cols();
      MatrixXd dz_all(4 * h, steps);
      VectorXd dh_next = VectorXd::Zero(h), dc_next = VectorXd::Zero(h);
      for (Index t = steps - 1; t >= 0; --t) {
        VectorXd dh = d_values[i].col(t) + dh_next;
        VectorXd dc = dc_next;
        VectorXd dz(4 * h);
        for (int r = 0; r < h; ++r) {
          const double tc = lc.tanhc(r, t);
          dc(r) += dh(r) * lc.og(r, t) * (1.0 - tc * tc);
          const double c_prev = t > 0 ? lc.c(r, t - 1) : 0.0;
          const double di = dc(r) * lc.gg(r, t);
          const double df = dc(r) * c_prev;
          const double dg = dc(r) * lc.ig(r, t);
          const double do_ = dh(r) * tc;
          dz(r) = di * lc.ig(r, t) * (1.0 - lc.ig(r, t));
          dz(h + r) = df * lc.fg(r, t) * (1.0 - lc.fg(r, t));
          dz(2 * h + r) = dg * (1.0 - lc.gg(r, t) * lc.gg(r, t));
          dz(3 * h + r) = do_ * lc.og(r, t) * (1.0 - lc.og(r, t));
          dc_next(r) = dc(r) * lc.fg(r, t);
        }
        dz_all.col(t) = dz;
        dh_next.noalias() = Wh.transpose() * dz;
      }
      view(grad_out, *idx.layer_blocks[i][0]).noalias() += dz_all * lc.combined.transpose();
      if (steps > 1) {
        view(grad_out, *idx.layer_blocks[i][1]).noalias() +=
            dz_all.rightCols(steps - 1) * lc.out.leftCols(steps - 1).transpose();
      }
      view(grad_out, *idx.layer_blocks[i][2]).col(0) += dz_all.rowwise().sum();
      d_combined.noalias() = Wx.transpose() * dz_all;
    }

    d_values[i - 1] += d_combined;
    for (const SkipEdge& e : spec.skips) {
      if (e.dst != i) continue;
      auto it = idx.skip_proj.find({e.dst, e.src});
      if (it != idx.skip_proj.end()) {
        view(grad_out, *it->second).noalias() += d_combined * caches[e.src].out.transpose();
        const auto P = view(w, *it->second);
        d_values[e.src].noalias() += P.transpose() * d_combined;
      } else {
        d_values[e.src] += d_combined;
      }
    }
  }
}

}  // namespace

Network::Network(NetworkSpec spec, Eigen::VectorXd weights)
    : spec_(std::move(spec)), layout_(build_layout(spec_)), weights_(std::move(weights)) {
  if (static_cast<std::size_t>(weights_.size()) != layout_.total) {
    throw ValidationError("weight vector length " + std::to_string(weights_.size()) +
                          " does not match parameter count " + std::to_string(layout_.total));
  }
  if (!weights_.allFinite()) throw ValidationError("weights contain non-finite values");
}

void Network::set_weights(Eigen::VectorXd weights) {
  if (static_cast<std::size_t>(weights.size()) != layout_.total) {
    throw ValidationError("weight vector length does not match parameter count");
  }
  if (!weights.allFinite()) throw ValidationError("weights contain non-finite values");
  weights_ = std::move(weights);
}

Network build_network(const NetworkSpec& spec, std::uint64_t seed) {
  const ParamLayout layout = build_layout(spec);
  VectorXd w = VectorXd::Zero(layout.total);
  Rng rng(seed);
  for (const ParamBlock& b : layout.blocks) {
    switch (b.role) {
      case ParamBlock::Role::kDenseB:
      case ParamBlock::Role::kHeadB:
        break;  // zero
      case ParamBlock::Role::kLstmB: {
        // forget-gate bias starts at one
        const int h = b.rows / 4;
        auto bias = view(w, b);
        for (int r = 0; r < h; ++r) bias(h + r, 0) = 1.0;
        break;
      }
      default: {
        const double limit = std::sqrt(6.0 / (b.rows + b.cols));
        auto m = view(w, b);
        for (int c = 0; c < b.cols; ++c)
          for (int r = 0; r < b.rows; ++r) m(r, c) = rng.uniform(-limit, limit);
        break;
      }
    }
  }
  return Network(spec, std::move(w));
}

GaussianPrediction forward_gaussian(const Network& net, const Sequence& x) {
  const BlockIndex idx(net.spec(), net.layout());
  return forward_one(net.spec(), idx, net.weights(), x, nullptr, nullptr);
}

GaussianBatch forward_gaussian(const Network& net, const std::vector<Sequence>& batch) {
  const BlockIndex idx(net.spec(), net.layout());
  GaussianBatch out;
  const int d = net.spec().output_dim;
  out.mean.resize(d, static_cast<Index>(batch.size()));
  out.variance.resize(d, static_cast<Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const GaussianPrediction p =
        forward_one(net.spec(), idx, net.weights(), batch[i], nullptr, nullptr);
    out.mean.col(static_cast<Index>(i)) = p.mean;
    out.variance.col(static_cast<Index>(i)) = p.variance;
  }
  return out;
}

double nll_loss(const GaussianPrediction& pred, const Eigen::VectorXd& target) {
  GaussianBatch b{pred.mean, pred.variance};
  return nll_loss(b, target);
}

double nll_loss(const GaussianBatch& pred, const Eigen::MatrixXd& targets) {
  if (pred.mean.rows() != targets.rows() || pred.mean.cols() != targets.cols()) {
    throw ValidationError("prediction/target shape mismatch");
  }
  if (targets.size() == 0) throw ValidationError("empty batch in nll_loss");
  if ((pred.variance.array() <= 0.0).any()) {
    throw ValidationError("nll_loss requires strictly positive variance");
  }
  const auto& v = pred.variance.array();
  const auto r = (targets - pred.mean).array();
  const double mean_term = (v.log() / 2.0 + r.square() / (2.0 * v)).mean();
  return mean_term + kNllConstant;
}

LossGrad grad(const Network& net, const std::vector<Sequence>& batch,
              const Eigen::MatrixXd& targets) {
  if (static_cast<Index>(batch.size()) != targets.cols()) {
    throw ValidationError("batch/target count mismatch");
  }
  if (batch.empty()) throw ValidationError("empty batch in grad");
  const NetworkSpec& spec = net.spec();
  const BlockIndex idx(spec, net.layout());
  const int d = spec.output_dim;
  const double norm = 1.0 / (static_cast<double>(batch.size()) * d);

  LossGrad result;
  result.grad = VectorXd::Zero(static_cast<Index>(net.parameter_count()));
  double loss_sum = 0.0;

  std::vector<LayerCache> caches;
  HeadCache head;
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const GaussianPrediction pred =
        forward_one(spec, idx, net.weights(), batch[s], &caches, &head);
    const VectorXd y = targets.col(static_cast<Index>(s));
    const auto v = pred.variance.array();
    const auto r = (y - pred.mean).array();
    loss_sum += (v.log() / 2.0 + r.square() / (2.0 * v)).sum();

    const VectorXd d_mean = (norm * (pred.mean - y).array() / v).matrix();
    const VectorXd d_var = (norm * (0.5 / v - r.square() / (2.0 * v.square()))).matrix();
    backward_one(spec, idx, net.weights(), caches, head, d_mean, d_var, result.grad);
  }
  result.loss = loss_sum * norm + kNllConstant;

  if (!result.grad.allFinite()) {
    for (const ParamBlock& b : net.layout().blocks) {
      if (!view(result.grad, b).allFinite()) {
        throw NumericError("non-finite gradient in layer " + std::to_string(b.layer), b.layer);
      }
    }
    throw NumericError("non-finite gradient");
  }
  if (!std::isfinite(result.loss)) throw NumericError("non-finite training loss");
  return result;
}

}  // namespace euq::nn
