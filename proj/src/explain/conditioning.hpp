// Copyright 2026 The ferx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Cholesky>

namespace ferx::explain::detail {

// LDLT::rcond() skips zero pivots, so the pivot spread is checked as well.
inline bool well_conditioned(const Eigen::LDLT<Eigen::MatrixXd>& ldlt) {
  if (ldlt.info() != Eigen::Success) return false;
  const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
  if (d.size() == 0 || !(d.maxCoeff() > 0.0)) return false;
  return d.minCoeff() > 1e-12 * d.maxCoeff() && ldlt.rcond() > 1e-12;
}

}  // namespace ferx::explain::detail
