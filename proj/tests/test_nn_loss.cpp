#include <doctest.h>

#include <cmath>

#include "euq/errors.hpp"
#include "euq/nn/network.hpp"
#include "euq/rng.hpp"

using namespace euq::nn;

namespace {

GaussianPrediction make_pred(double mean, double var) {
  GaussianPrediction p;
  p.mean = Eigen::VectorXd::Constant(1, mean);
  p.variance = Eigen::VectorXd::Constant(1, var);
  return p;
}

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

TEST_CASE("NLL analytic values") {
  CHECK(nll_loss(make_pred(1.0, 1.0), scalar(1.0)) == doctest::Approx(0.91894).epsilon(1e-4));
  CHECK(nll_loss(make_pred(0.0, 1.0), scalar(1.0)) == doctest::Approx(1.41894).epsilon(1e-4));
  const double e2 = std::exp(2.0);
  CHECK(nll_loss(make_pred(0.0, e2), scalar(0.0)) == doctest::Approx(1.91894).epsilon(1e-4));
}

TEST_CASE("NLL constant is half log two pi") {
  CHECK(kNllConstant == doctest::Approx(0.5 * std::log(2.0 * 3.14159265358979323846)).epsilon(1e-15));
}

TEST_CASE("non-positive variance is a domain error") {
  CHECK_THROWS_AS(nll_loss(make_pred(0.0, 0.0), scalar(0.0)), euq::ValidationError);
  CHECK_THROWS_AS(nll_loss(make_pred(0.0, -1.0), scalar(0.0)), euq::ValidationError);
}

TEST_CASE("shape mismatch and empty batches are rejected") {
  GaussianBatch b;
  b.mean = Eigen::MatrixXd::Zero(2, 3);
  b.variance = Eigen::MatrixXd::Ones(2, 3);
  CHECK_THROWS_AS(nll_loss(b, Eigen::MatrixXd::Zero(3, 3)), euq::ValidationError);
  GaussianBatch empty;
  empty.mean = Eigen::MatrixXd::Zero(2, 0);
  empty.variance = Eigen::MatrixXd::Zero(2, 0);
  CHECK_THROWS_AS(nll_loss(empty, Eigen::MatrixXd::Zero(2, 0)), euq::ValidationError);
}

TEST_CASE("batch NLL is the mean over samples and outputs") {
  GaussianBatch b;
  b.mean = Eigen::MatrixXd::Zero(2, 2);
  b.variance = Eigen::MatrixXd::Ones(2, 2);
  Eigen::MatrixXd y(2, 2);
  y << 1.0, 0.0, 0.0, 1.0;  // two of four entries have unit residual
  CHECK(nll_loss(b, y) == doctest::Approx(kNllConstant + 0.25));
}

TEST_CASE("with a perfect mean the loss dominates half log variance pointwise") {
  euq::Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double var = std::exp(rng.uniform(-6.0, 6.0));
    const double y = rng.uniform(-10.0, 10.0);
    const double loss = nll_loss(make_pred(y, var), scalar(y));
    CHECK(loss - kNllConstant >= doctest::Approx(0.5 * std::log(var)));
  }
}
