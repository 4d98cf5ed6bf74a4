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

#include "euq/ensemble/uq.hpp"

#include <algorithm>

#include "euq/errors.hpp"

namespace euq::ensemble {

namespace {

UncertaintyDecomposition decompose(const std::vector<nn::GaussianPrediction>& members,
                                   bool sample_form) {
  const std::size_t k = members.size();
  if (k == 0) throw ValidationError("ensemble is empty");
  if (sample_form && k < 2) throw ValidationError("sample-form decomposition requires K >= 2");
  const Eigen::Index d = members[0].mean.size();
  for (const auto& m : members) {
    if (m.mean.size() != d || m.variance.size() != d) {
      throw ValidationError("ensemble member dimensions differ");
    }
  }

  UncertaintyDecomposition out;
  out.sample_form = sample_form;
  out.mean = Eigen::VectorXd::Zero(d);
  out.aleatoric = Eigen::VectorXd::Zero(d);
  for (const auto& m : members) {
    out.mean += m.mean;
    out.aleatoric += m.variance;
  }
  const double kd = static_cast<double>(k);
  out.mean /= kd;
  out.aleatoric /= kd;

  out.epistemic = Eigen::VectorXd::Zero(d);
  for (const auto& m : members) {
    out.epistemic.array() += (m.mean - out.mean).array().square();
  }
  out.epistemic /= sample_form ? (kd - 1.0) : kd;
  out.total = out.aleatoric + out.epistemic;
  return out;
}

}  // namespace

std::vector<search::CatalogRecord> select_top_k(const std::vector<search::CatalogRecord>& catalog,
                                                int k) {
  if (k < 1) throw ValidationError("ensemble size must be positive");
  std::vector<search::CatalogRecord> usable;
  for (const auto& r : catalog) {
    if (r.usable()) usable.push_back(r);
  }
  if (static_cast<int>(usable.size()) < k) {
    throw ValidationError("catalog holds " + std::to_string(usable.size()) +
                          " usable records, need " + std::to_string(k));
  }
  std::stable_sort(usable.begin(), usable.end(),
                   [](const search::CatalogRecord& a, const search::CatalogRecord& b) {
                     if (a.valid_nll != b.valid_nll) return a.valid_nll < b.valid_nll;
                     return a.id < b.id;
                   });
  usable.resize(static_cast<std::size_t>(k));
  return usable;
}

UncertaintyDecomposition decompose_sample(const std::vector<nn::GaussianPrediction>& members) {
  return decompose(members, true);
}

UncertaintyDecomposition decompose_population(const std::vector<nn::GaussianPrediction>& members) {
  return decompose(members, false);
}

Eigen::VectorXd project_uncertainty_physical(const Eigen::VectorXd& modal_variance,
                                             const pod::PodBasis& basis, ModalProjection mode) {
  if (modal_variance.size() != basis.n_modes()) {
    throw ValidationError("modal variance length does not match basis mode count");
  }
  if ((modal_variance.array() < 0.0).any()) {
    throw ValidationError("modal variances must be nonnegative");
  }
  if (mode == ModalProjection::kQuadrature) {
    return (basis.vectors.array().square().matrix() * modal_variance).array().sqrt();
  }
  return (basis.vectors * modal_variance.array().sqrt().matrix()).array().abs();
}

}  // namespace euq::ensemble
