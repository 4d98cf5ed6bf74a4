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

#ifndef EUQ_POD_POD_HPP_
#define EUQ_POD_POD_HPP_

#include <Eigen/Core>
#include <filesystem>

namespace euq::pod {

// Mean-subtracted snapshot collection: columns are y_t = D_t - mean.
struct SnapshotMatrix {
  Eigen::MatrixXd columns;  // N x T
  Eigen::VectorXd mean;     // N

  static SnapshotMatrix center(const Eigen::MatrixXd& snapshots);
};

// Leading orthonormal basis of the snapshot covariance. Eigenvalues descend;
// each vector's first nonzero component is positive (deterministic signs).
struct PodBasis {
  Eigen::VectorXd mean;        // N
  Eigen::VectorXd eigenvalues; // M, eigenvalues of S S^T
  Eigen::MatrixXd vectors;     // N x M, orthonormal columns
  double total_energy = 0.0;   // sum over all eigenvalues at fit time
  int fit_snapshots = 0;

  int n_modes() const { return static_cast<int>(eigenvalues.size()); }
  Eigen::Index state_dim() const { return mean.size(); }
  // Retained fraction of snapshot energy at fit time.
  double energy_fraction() const;
};

// Computes the basis through a thin SVD of the centered snapshot matrix
// (identical to the eigenpairs of S S^T, better conditioned at large N).
PodBasis fit_pod(const Eigen::MatrixXd& snapshots, int n_modes);

// Picks the smallest mode count retaining `energy_target` of the snapshot
// energy, capped at `max_modes`.
PodBasis fit_pod_energy(const Eigen::MatrixXd& snapshots, double energy_target, int max_modes);

// Coefficients of one (not necessarily training) snapshot: inner products of
// the mean-subtracted input against the basis vectors.
Eigen::VectorXd project(const PodBasis& basis, const Eigen::VectorXd& snapshot);

// Column t holds the coefficients of snapshots.col(t).
Eigen::MatrixXd project_all(const PodBasis& basis, const Eigen::MatrixXd& snapshots);

// mean + sum_j a_j v_j.
Eigen::VectorXd reconstruct(const PodBasis& basis, const Eigen::VectorXd& coefficients);

struct ResidualReport {
  double residual = 0.0;         // sum_t || y_t - V V^T y_t ||^2
  double energy_fraction = 0.0;  // retained fraction at fit time
};

ResidualReport residual(const PodBasis& basis, const Eigen::MatrixXd& snapshots);

// Basis file: "POD1" magic, N/T/M as little-endian u32, retained energy
// fraction and total energy as little-endian f64, then mean, eigenvalues and
// basis vectors (column after column) as little-endian f64.
void save_basis(const std::filesystem::path& path, const PodBasis& basis);
PodBasis load_basis(const std::filesystem::path& path);

}  // namespace euq::pod

#endif  // EUQ_POD_POD_HPP_
