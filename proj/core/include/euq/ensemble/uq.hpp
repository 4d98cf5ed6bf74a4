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

#ifndef EUQ_ENSEMBLE_UQ_HPP_
#define EUQ_ENSEMBLE_UQ_HPP_

#include <vector>

#include "euq/nn/network.hpp"
#include "euq/pod/pod.hpp"
#include "euq/search/types.hpp"

namespace euq::ensemble {

// The K catalog records with the smallest validation NLL among non-failed
// entries; ties break toward the earlier id. Throws when fewer than K
// non-failed records exist.
std::vector<search::CatalogRecord> select_top_k(const std::vector<search::CatalogRecord>& catalog,
                                                int k);

// Mixture mean plus the split of its variance into the mean predicted
// variance (aleatoric) and the spread of member means (epistemic).
struct UncertaintyDecomposition {
  Eigen::VectorXd mean;
  Eigen::VectorXd aleatoric;
  Eigen::VectorXd epistemic;
  Eigen::VectorXd total;    // aleatoric + epistemic elementwise
  bool sample_form = true;  // 1/(K-1) epistemic weighting when true, 1/K otherwise
};

// Sample-form estimator: epistemic uses 1/(K-1); requires K >= 2.
UncertaintyDecomposition decompose_sample(const std::vector<nn::GaussianPrediction>& members);

// Population form: epistemic uses 1/K, which equals the exact variance of the
// uniform Gaussian mixture; requires K >= 1.
UncertaintyDecomposition decompose_population(const std::vector<nn::GaussianPrediction>& members);

enum class ModalProjection {
  kQuadrature,  // sqrt(sum_j var_j * v_j(x)^2), independent modes
  kCoherent,    // |sum_j sd_j * v_j(x)|, fully correlated modes
};

// Pushes per-mode variances through the basis to a pointwise standard
// deviation over the flattened state.
Eigen::VectorXd project_uncertainty_physical(const Eigen::VectorXd& modal_variance,
                                             const pod::PodBasis& basis,
                                             ModalProjection mode = ModalProjection::kQuadrature);

}  // namespace euq::ensemble

#endif  // EUQ_ENSEMBLE_UQ_HPP_
