#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <filesystem>

#include "euq/errors.hpp"
#include "euq/pod/pod.hpp"
#include "euq/rng.hpp"
#include "euq/sst/synth.hpp"
#include "test_helpers.hpp"

using namespace euq::pod;

namespace {

Eigen::MatrixXd random_snapshots(int n, int t, std::uint64_t seed) {
  euq::Rng rng(seed);
  Eigen::MatrixXd m(n, t);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

TEST_CASE("the two-snapshot analytic case") {
  Eigen::MatrixXd snaps(2, 2);
  snaps << 1.0, -1.0,
           0.0, 0.0;
  const PodBasis basis = fit_pod(snaps, 1);
  CHECK(basis.mean(0) == doctest::Approx(0.0));
  CHECK(basis.mean(1) == doctest::Approx(0.0));
  CHECK(basis.eigenvalues(0) == doctest::Approx(2.0));
  CHECK(basis.vectors(0, 0) == doctest::Approx(1.0));
  CHECK(basis.vectors(1, 0) == doctest::Approx(0.0));
  CHECK(project(basis, snaps.col(0))(0) == doctest::Approx(1.0));
  CHECK(project(basis, snaps.col(1))(0) == doctest::Approx(-1.0));
}

TEST_CASE("basis matches a dense eigendecomposition of S S^T") {
  const Eigen::MatrixXd snaps = random_snapshots(20, 10, 42);
  const int m = 6;
  const PodBasis basis = fit_pod(snaps, m);

  // Independent oracle: eigenpairs of the covariance built explicitly.
  const Eigen::VectorXd mean = snaps.rowwise().mean();
  const Eigen::MatrixXd centered = snaps.colwise() - mean;
  const Eigen::MatrixXd cov = centered * centered.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  REQUIRE(eig.info() == Eigen::Success);

  for (int j = 0; j < m; ++j) {
    const Eigen::Index oracle_idx = cov.rows() - 1 - j;  // ascending order in the solver
    const double lambda = eig.eigenvalues()(oracle_idx);
    CHECK(std::abs(basis.eigenvalues(j) - lambda) <= 1e-8 * std::abs(lambda));
    const Eigen::VectorXd v = eig.eigenvectors().col(oracle_idx);
    const double align = std::abs(v.dot(basis.vectors.col(j)));
    CHECK(align == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("duplicating the snapshot set doubles eigenvalues, not vectors") {
  const Eigen::MatrixXd snaps = random_snapshots(12, 6, 7);
  Eigen::MatrixXd doubled(12, 12);
  doubled << snaps, snaps;
  const PodBasis a = fit_pod(snaps, 4);
  const PodBasis b = fit_pod(doubled, 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(b.eigenvalues(j) == doctest::Approx(2.0 * a.eigenvalues(j)).epsilon(1e-8));
    CHECK(std::abs(a.vectors.col(j).dot(b.vectors.col(j))) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("projection of the mean is zero and coordinates are recovered") {
  const Eigen::MatrixXd snaps = random_snapshots(16, 9, 3);
  const PodBasis basis = fit_pod(snaps, 5);
  CHECK(project(basis, basis.mean).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::VectorXd shifted = basis.mean + 3.0 * basis.vectors.col(0);
  const Eigen::VectorXd a = project(basis, shifted);
  CHECK(a(0) == doctest::Approx(3.0));
  CHECK(a.tail(4).cwiseAbs().maxCoeff() < 1e-10);

  // project(reconstruct(.)) is the identity on coefficient space.
  euq::Rng rng(10);
  Eigen::VectorXd coeffs(5);
  for (int j = 0; j < 5; ++j) coeffs(j) = rng.uniform(-2.0, 2.0);
  const Eigen::VectorXd back = project(basis, reconstruct(basis, coeffs));
  CHECK((back - coeffs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("reconstruction round-trips at full rank") {
  const Eigen::MatrixXd snaps = random_snapshots(10, 7, 5);
  const PodBasis basis = fit_pod(snaps, 6);  // rank of centered 10x7 is at most 6
  CHECK(reconstruct(basis, Eigen::VectorXd::Zero(6)) == basis.mean);
  for (int t = 0; t < 7; ++t) {
    const Eigen::VectorXd rec = reconstruct(basis, project(basis, snaps.col(t)));
    CHECK((rec - snaps.col(t)).norm() < 1e-8);
  }
}

TEST_CASE("residual equals the eigenvalue tail") {
  const Eigen::MatrixXd snaps = random_snapshots(24, 12, 8);
  const PodBasis full = fit_pod(snaps, 11);
  const double total = full.eigenvalues.sum();

  // Full rank: residual vanishes.
  CHECK(residual(full, snaps).residual < 1e-8);

  // M = 0: residual equals the whole energy.
  const PodBasis none = fit_pod(snaps, 0);
  const Eigen::MatrixXd centered = snaps.colwise() - none.mean;
  CHECK(residual(none, snaps).residual == doctest::Approx(centered.squaredNorm()).epsilon(1e-10));
  CHECK(residual(none, snaps).residual == doctest::Approx(total).epsilon(1e-6));

  // Truncated: residual equals the trailing eigenvalues.
  for (int m : {3, 6, 9}) {
    const PodBasis basis = fit_pod(snaps, m);
    const double tail = full.eigenvalues.tail(11 - m).sum();
    CHECK(residual(basis, snaps).residual == doctest::Approx(tail).epsilon(1e-6));
    CHECK(residual(basis, snaps).energy_fraction ==
          doctest::Approx(basis.eigenvalues.sum() / total).epsilon(1e-6));
  }
}

TEST_CASE("orthonormality, ordering and sign conventions hold") {
  const Eigen::MatrixXd snaps = random_snapshots(30, 14, 21);
  const PodBasis basis = fit_pod(snaps, 10);
  const Eigen::MatrixXd gram = basis.vectors.transpose() * basis.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-10);
  for (int j = 1; j < 10; ++j) CHECK(basis.eigenvalues(j) <= basis.eigenvalues(j - 1));
  for (int j = 0; j < 10; ++j) {
    for (Eigen::Index i = 0; i < basis.vectors.rows(); ++i) {
      if (std::abs(basis.vectors(i, j)) > 1e-12) {
        CHECK(basis.vectors(i, j) > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("energy-target fitting picks the smallest sufficient mode count") {
  const Eigen::MatrixXd field = euq::sst::synth_wave_field(48, 30, 4, 17);
  const PodBasis basis = fit_pod_energy(field, 0.9, 50);
  CHECK(basis.n_modes() >= 1);
  CHECK(basis.energy_fraction() >= 0.9);
  if (basis.n_modes() > 1) {
    const PodBasis smaller = fit_pod(field, basis.n_modes() - 1);
    CHECK(smaller.energy_fraction() < 0.9);
  }
  const PodBasis capped = fit_pod_energy(field, 1.0, 2);
  CHECK(capped.n_modes() == 2);
}

TEST_CASE("wave-field rank equals the generating mode count") {
  const int r = 5;
  const Eigen::MatrixXd field = euq::sst::synth_wave_field(64, 40, r, 3);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(field);
  const Eigen::VectorXd sv = svd.singularValues();
  CHECK(sv(r - 1) / sv(0) > 1e-8);
  CHECK(sv(r) / sv(0) < 1e-10);
}

TEST_CASE("basis files round-trip") {
  const Eigen::MatrixXd snaps = random_snapshots(14, 8, 2);
  const PodBasis basis = fit_pod(snaps, 5);
  const auto dir = euq_test::temp_dir("pod");
  save_basis(dir / "b.pod", basis);
  const PodBasis loaded = load_basis(dir / "b.pod");
  CHECK(loaded.mean == basis.mean);
  CHECK(loaded.eigenvalues == basis.eigenvalues);
  CHECK(loaded.vectors == basis.vectors);
  CHECK(loaded.total_energy == basis.total_energy);
  CHECK(loaded.fit_snapshots == basis.fit_snapshots);
  CHECK_THROWS_AS(load_basis(dir / "missing.pod"), euq::DataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("invalid mode counts are rejected") {
  const Eigen::MatrixXd snaps = random_snapshots(6, 4, 1);
  CHECK_THROWS_AS(fit_pod(snaps, 5), euq::ValidationError);
  CHECK_THROWS_AS(fit_pod(Eigen::MatrixXd(6, 0), 1), euq::ValidationError);
  const PodBasis basis = fit_pod(snaps, 3);
  CHECK_THROWS_AS(project(basis, Eigen::VectorXd::Zero(5)), euq::ValidationError);
  CHECK_THROWS_AS(reconstruct(basis, Eigen::VectorXd::Zero(2)), euq::ValidationError);
}
