#include <doctest.h>

#include <cmath>
#include <vector>

#include "euq/errors.hpp"
#include "euq/nn/network.hpp"
#include "euq/rng.hpp"
#include "test_helpers.hpp"

using namespace euq::nn;

namespace {

double batch_loss(const Network& net, const std::vector<Sequence>& xs, const Eigen::MatrixXd& ys) {
  return nll_loss(forward_gaussian(net, xs), ys);
}

// Central finite differences over every parameter.
Eigen::VectorXd fd_gradient(Network net, const std::vector<Sequence>& xs,
                            const Eigen::MatrixXd& ys, double h = 1e-6) {
  Eigen::VectorXd base = net.weights();
  Eigen::VectorXd g(base.size());
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    Eigen::VectorXd w = base;
    w(i) = base(i) + h;
    net.set_weights(w);
    const double up = batch_loss(net, xs, ys);
    w(i) = base(i) - h;
    net.set_weights(w);
    const double down = batch_loss(net, xs, ys);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

// Relative error with the denominator floored at 1e-5: below that the central
// difference itself is dominated by cancellation noise (~1e-10 at h = 1e-6).
double max_rel_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a(i)), std::abs(b(i)), 1e-5});
    worst = std::max(worst, std::abs(a(i) - b(i)) / denom);
  }
  return worst;
}

struct RandomCase {
  Network net;
  std::vector<Sequence> xs;
  Eigen::MatrixXd ys;
};

RandomCase random_case(euq::Rng& rng, int max_width, bool recurrent) {
  NetworkSpec spec;
  spec.input_dim = 1 + static_cast<int>(rng.below(4));
  spec.output_dim = 1 + static_cast<int>(rng.below(3));
  const int n_layers = 1 + static_cast<int>(rng.below(3));
  for (int i = 0; i < n_layers; ++i) {
    const int width = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_width - 1)));
    if (recurrent) {
      spec.layers.push_back(LayerSpec::recurrent(width));
    } else {
      const double pick = rng.uniform01();
      const Activation act = pick < 0.5 ? Activation::kTanh
                                        : (pick < 0.8 ? Activation::kRelu : Activation::kLinear);
      spec.layers.push_back(LayerSpec::dense(width, act));
    }
  }
  if (n_layers >= 2 && rng.uniform01() < 0.7) spec.skips.push_back({0, n_layers});
  if (n_layers == 3 && rng.uniform01() < 0.5) spec.skips.push_back({1, 3});

  RandomCase c{build_network(spec, rng.next_u64()), {}, {}};
  const int batch = 1 + static_cast<int>(rng.below(3));
  const int steps = recurrent ? 1 + static_cast<int>(rng.below(4)) : 1;
  c.ys.resize(spec.output_dim, batch);
  for (int s = 0; s < batch; ++s) {
    Sequence x(spec.input_dim, steps);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1.0, 1.0);
    c.xs.push_back(std::move(x));
    for (int k = 0; k < spec.output_dim; ++k) c.ys(k, s) = rng.uniform(-1.5, 1.5);
  }
  return c;
}

}  // namespace

TEST_CASE("analytic gradients match central finite differences") {
  euq::Rng rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    RandomCase c = random_case(rng, 6, trial % 2 == 1);
    const LossGrad lg = grad(c.net, c.xs, c.ys);
    CHECK(lg.loss == doctest::Approx(batch_loss(c.net, c.xs, c.ys)).epsilon(1e-12));
    const Eigen::VectorXd fd = fd_gradient(c.net, c.xs, c.ys);
    CHECK(max_rel_error(lg.grad, fd) < 1e-4);
  }
}

TEST_CASE("a perfectly matched mean zeroes the squared-error gradient") {
  NetworkSpec spec;
  spec.input_dim = 2;
  spec.output_dim = 2;
  spec.layers = {LayerSpec::dense(4, Activation::kTanh)};
  const Network net = build_network(spec, 31);

  Sequence x(2, 1);
  x << 0.4, -0.9;
  const GaussianPrediction p = forward_gaussian(net, x);
  Eigen::MatrixXd y(2, 1);
  y.col(0) = p.mean;  // targets equal the network mean exactly

  const LossGrad lg = grad(net, {x}, y);
  // The mean-head rows see gradient (mean - y)/var = 0.
  const auto* head_w = euq_test::find_block(net.layout(), ParamBlock::Role::kHeadW);
  const auto* head_b = euq_test::find_block(net.layout(), ParamBlock::Role::kHeadB);
  const Eigen::MatrixXd gw = euq_test::get_block(lg.grad, *head_w);
  const Eigen::MatrixXd gb = euq_test::get_block(lg.grad, *head_b);
  CHECK(gw.topRows(2).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK(gb.topRows(2).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  // The variance head still pulls toward smaller variance.
  CHECK(gw.bottomRows(2).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("duplicating every sample leaves the mean-loss gradient unchanged") {
  euq::Rng rng(99);
  RandomCase c = random_case(rng, 5, false);
  const LossGrad once = grad(c.net, c.xs, c.ys);

  std::vector<Sequence> xs2 = c.xs;
  xs2.insert(xs2.end(), c.xs.begin(), c.xs.end());
  Eigen::MatrixXd ys2(c.ys.rows(), c.ys.cols() * 2);
  ys2 << c.ys, c.ys;
  const LossGrad twice = grad(c.net, xs2, ys2);

  CHECK((once.grad - twice.grad).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(once.loss == doctest::Approx(twice.loss).epsilon(1e-12));
}

TEST_CASE("non-finite inputs surface as a numeric error") {
  NetworkSpec spec;
  spec.input_dim = 1;
  spec.output_dim = 1;
  spec.layers = {LayerSpec::dense(2, Activation::kLinear)};
  const Network net = build_network(spec, 8);
  Sequence x(1, 1);
  x(0, 0) = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd y(1, 1);
  y(0, 0) = 0.0;
  CHECK_THROWS_AS(grad(net, {x}, y), euq::NumericError);
}
