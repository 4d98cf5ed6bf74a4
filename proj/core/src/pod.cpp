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

#include "euq/pod/pod.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <cstring>
#include <fstream>

#include "euq/errors.hpp"

namespace euq::pod {

namespace {

void write_u32_le(std::ostream& os, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32_le(std::istream& is) {
  unsigned char buf[4];
  is.read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

void write_f64_le(std::ostream& os, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

double read_f64_le(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

// First component larger than the noise floor decides the sign.
void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double v = vectors(i, j);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) vectors.col(j) = -vectors.col(j);
        break;
      }
    }
  }
}

PodBasis fit_from_svd(const SnapshotMatrix& sm, int n_modes) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(sm.columns, Eigen::ComputeThinU);
  PodBasis basis;
  basis.mean = sm.mean;
  basis.fit_snapshots = static_cast<int>(sm.columns.cols());
  const Eigen::VectorXd sv = svd.singularValues();
  basis.total_energy = sv.array().square().sum();
  basis.eigenvalues = sv.head(n_modes).array().square();
  basis.vectors = svd.matrixU().leftCols(n_modes);
  fix_signs(basis.vectors);
  return basis;
}

}  // namespace

SnapshotMatrix SnapshotMatrix::center(const Eigen::MatrixXd& snapshots) {
  if (snapshots.cols() == 0) throw ValidationError("cannot center an empty snapshot set");
  SnapshotMatrix sm;
  sm.mean = snapshots.rowwise().mean();
  sm.columns = snapshots.colwise() - sm.mean;
  return sm;
}

double PodBasis::energy_fraction() const {
  return total_energy > 0.0 ? eigenvalues.sum() / total_energy : 1.0;
}

PodBasis fit_pod(const Eigen::MatrixXd& snapshots, int n_modes) {
  if (snapshots.cols() == 0) throw ValidationError("no snapshots to fit");
  const int max_modes = static_cast<int>(std::min(snapshots.rows(), snapshots.cols()));
  if (n_modes < 0 || n_modes > max_modes) {
    throw ValidationError("mode count " + std::to_string(n_modes) + " exceeds min(N, T) = " +
                          std::to_string(max_modes));
  }
  return fit_from_svd(SnapshotMatrix::center(snapshots), n_modes);
}

PodBasis fit_pod_energy(const Eigen::MatrixXd& snapshots, double energy_target, int max_modes) {
  if (!(energy_target > 0.0) || energy_target > 1.0) {
    throw ValidationError("energy target must lie in (0, 1]");
  }
  if (snapshots.cols() == 0) throw ValidationError("no snapshots to fit");
  const SnapshotMatrix sm = SnapshotMatrix::center(snapshots);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(sm.columns, Eigen::ComputeThinU);
  const Eigen::VectorXd lambda = svd.singularValues().array().square();
  const double total = lambda.sum();

  int m = 1;
  double retained = lambda(0);
  while (retained < energy_target * total && m < lambda.size()) {
    retained += lambda(m);
    ++m;
  }
  m = std::min(m, std::max(1, max_modes));

  PodBasis basis;
  basis.mean = sm.mean;
  basis.fit_snapshots = static_cast<int>(sm.columns.cols());
  basis.total_energy = total;
  basis.eigenvalues = lambda.head(m);
  basis.vectors = svd.matrixU().leftCols(m);
  fix_signs(basis.vectors);
  return basis;
}

Eigen::VectorXd project(const PodBasis& basis, const Eigen::VectorXd& snapshot) {
  if (snapshot.size() != basis.state_dim()) throw ValidationError("snapshot dimension mismatch");
  return basis.vectors.transpose() * (snapshot - basis.mean);
}

Eigen::MatrixXd project_all(const PodBasis& basis, const Eigen::MatrixXd& snapshots) {
  if (snapshots.rows() != basis.state_dim()) throw ValidationError("snapshot dimension mismatch");
  return basis.vectors.transpose() * (snapshots.colwise() - basis.mean);
}

Eigen::VectorXd reconstruct(const PodBasis& basis, const Eigen::VectorXd& coefficients) {
  if (coefficients.size() != basis.n_modes()) throw ValidationError("coefficient length mismatch");
  return basis.mean + basis.vectors * coefficients;
}

ResidualReport residual(const PodBasis& basis, const Eigen::MatrixXd& snapshots) {
  if (snapshots.rows() != basis.state_dim()) throw ValidationError("snapshot dimension mismatch");
  ResidualReport report;
  const Eigen::MatrixXd centered = snapshots.colwise() - basis.mean;
  const Eigen::MatrixXd coeffs = basis.vectors.transpose() * centered;
  report.residual = (centered - basis.vectors * coeffs).squaredNorm();
  report.energy_fraction = basis.energy_fraction();
  return report;
}

void save_basis(const std::filesystem::path& path, const PodBasis& basis) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open basis file for writing: " + path.string());
  os.write("POD1", 4);
  write_u32_le(os, static_cast<std::uint32_t>(basis.state_dim()));
  write_u32_le(os, static_cast<std::uint32_t>(basis.fit_snapshots));
  write_u32_le(os, static_cast<std::uint32_t>(basis.n_modes()));
  write_f64_le(os, basis.energy_fraction());
  write_f64_le(os, basis.total_energy);
  for (Eigen::Index i = 0; i < basis.mean.size(); ++i) write_f64_le(os, basis.mean(i));
  for (Eigen::Index j = 0; j < basis.eigenvalues.size(); ++j) write_f64_le(os, basis.eigenvalues(j));
  for (Eigen::Index j = 0; j < basis.vectors.cols(); ++j)
    for (Eigen::Index i = 0; i < basis.vectors.rows(); ++i) write_f64_le(os, basis.vectors(i, j));
  if (!os) throw DataError("short write to basis file: " + path.string());
}

PodBasis load_basis(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open basis file: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "POD1") throw DataError("bad basis magic in " + path.string());
  const std::uint32_t n = read_u32_le(is);
  const std::uint32_t t = read_u32_le(is);
  const std::uint32_t m = read_u32_le(is);
  (void)read_f64_le(is);  // stored energy fraction; recomputed from eigenvalues
  PodBasis basis;
  basis.fit_snapshots = static_cast<int>(t);
  basis.total_energy = read_f64_le(is);
  basis.mean.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) basis.mean(i) = read_f64_le(is);
  basis.eigenvalues.resize(m);
  for (std::uint32_t j = 0; j < m; ++j) basis.eigenvalues(j) = read_f64_le(is);
  basis.vectors.resize(n, m);
  for (std::uint32_t j = 0; j < m; ++j)
    for (std::uint32_t i = 0; i < n; ++i) basis.vectors(i, j) = read_f64_le(is);
  if (!is) throw DataError("truncated basis file: " + path.string());
  return basis;
}

}  // namespace euq::pod
