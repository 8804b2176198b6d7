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

#ifndef MBCN_EVOLUTION_H
#define MBCN_EVOLUTION_H

#include <functional>
#include <optional>
#include <vector>

#include "mbcn/hamiltonian.h"
#include "mbcn/random.h"

namespace mbcn {

struct EigenOptions {
    double tol = 1e-9;
    int max_matvecs = 20000;
    /// Krylov subspace size before a thick restart.
    int subspace = 40;
    uint64_t seed = 0x5eed;
    /// After convergence, search the deflated complement for a missed
    /// degenerate partner and fold it in.
    bool deflation_check = true;
};

struct EigenPairs {
    std::vector<double> values;
    std::vector<CVector> vectors;
    /// Largest residual norm over the returned pairs.
    double residual = 0;
    int matvecs = 0;
};

/// Lowest `count` eigenpairs of a Hermitian operator by thick-restart Lanczos
/// with full reorthogonalization. Throws ErrorKind::Convergence if the residual
/// tolerance is not met within the matvec budget.
EigenPairs lowest_eigenpairs(const SparseOperator &op, int count, const EigenOptions &options = {});

struct GroundState {
    double energy = 0;
    FockState state;
    /// E_1 - E_0, or +inf for a one-dimensional space.
    double gap = 0;
    double residual = 0;
    bool degeneracy_warning = false;
};

GroundState ground_state(const SparseOperator &op, double tol = 1e-9, int max_matvecs = 20000);

/// exp(-i H duration) |state> by adaptive Lanczos propagation; the time step is
/// halved when the a-posteriori error estimate at the largest subspace exceeds tol.
FockState propagate(const SparseOperator &op, const FockState &state, double duration, double tol = 1e-10,
                    int max_subspace = 60);

/// Applies the eta quench steps exp(-i H_k T), k = 0..eta-1 in time order, by
/// full-space Krylov propagation.
FockState apply_random_quench_unitary(const FockState &state, const LatticeGeometry &geometry, const QuenchSpec &spec,
                                      double tol = 1e-10);

/// Dense exp(-i H T) for a Hermitian matrix.
CMatrix hermitian_exp(const CMatrix &h, double time);

/// Quench unitary restricted to the region's `n_local`-particle sector, in the
/// region-local basis of quench_step_sector_matrix.
CMatrix quench_sector_unitary(const LatticeGeometry &geometry, const QuenchSpec &spec, int n_local);

enum class EnsembleKind { Quench, Haar };

struct FramePotential {
    double estimate = 0;
    /// Standard error of the pair-averaged estimate (jackknife over samples).
    double standard_error = 0;
    double haar_value = 2;
    int sector_dimension = 0;
};

/// Second frame potential E|Tr(U^dag V)|^4 of the ensemble restricted to the
/// region's `n_local`-particle sector, averaged over all distinct sample pairs.
/// The quench ensemble draws sample i with seed derive_seed(spec.seed, {i}).
FramePotential frame_potential_check(const LatticeGeometry &geometry, const QuenchSpec &spec, int n_local,
                                     int n_samples, EnsembleKind kind = EnsembleKind::Quench);

}  // namespace mbcn

#endif
