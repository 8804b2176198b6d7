// Copyright 2026 The mbcn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MBCN_TESTS_HELPERS_H
#define MBCN_TESTS_HELPERS_H

#include <numbers>

#include <Eigen/Eigenvalues>

#include "mbcn/evolution.h"

namespace mbcn::testing {

constexpr double kPi = std::numbers::pi;

inline FockState random_state(const BasisPtr &basis, uint64_t seed) {
    Rng rng(seed);
    FockState s(basis, random_vector(basis->dimension(), rng));
    s.normalize();
    return s;
}

// Dense Hermitian eigensolve, independent of the Lanczos code.
inline Eigen::VectorXd dense_spectrum(const SparseOperator &op) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(op.to_dense(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline FockState dense_ground_state(const SparseOperator &op) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(op.to_dense());
    return FockState(op.basis(), es.eigenvectors().col(0));
}

inline FockState hofstadter_ground_state(const LatticeGeometry &g, int n, double flux) {
    HofstadterSpec hs;
    hs.flux = flux;
    return dense_ground_state(build_hofstadter(g, enumerate_basis(g.n_sites(), n), hs));
}

}  // namespace mbcn::testing

#endif
