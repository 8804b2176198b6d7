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

#ifndef MBCN_SWAP_CORRELATOR_H
#define MBCN_SWAP_CORRELATOR_H

#include <span>
#include <vector>

#include "mbcn/basis.h"
#include "mbcn/defect_ops.h"

namespace mbcn {

/// Two-copy SWAP correlator dressed with the polarization defect V on R1 and the
/// twist W on R2, evaluated without building the doubled Hilbert space.
///
/// With A_j the R1 reduced operator collected from complement configurations
/// holding j bosons in R2, and D the diagonal of V on R1,
///
///     T(theta) = sum_{j,k} exp(i theta (j - k)) Tr[D A_j D^dag A_k],
///
/// so the moment matrix Tr[D A_j D^dag A_k] is built once and every grid point
/// costs O(|R2|^2).
class SwapCorrelator {
   public:
    SwapCorrelator(const LatticeGeometry &geometry, const FockState &state, const Region &r1, const Region &r2,
                   const DefectSpec &defect);

    cdouble operator()(double theta) const;
    std::vector<cdouble> evaluate(std::span<const double> grid) const;
    /// Tr[rho_R1^2] of the undressed state.
    double purity() const {
        return purity_;
    }
    const CMatrix &moments() const {
        return moments_;
    }

   private:
    CMatrix moments_;
    double purity_ = 0;
};

std::vector<cdouble> swap_T(const LatticeGeometry &geometry, const FockState &state, const Region &r1,
                            const Region &r2, const DefectSpec &defect, std::span<const double> grid);

/// Literal two-copy evaluation of the correlator: builds psi (x) psi, applies
/// the diagonal defects and the explicit R1 swap permutation. Limited to
/// dimension^2 <= 1e7.
cdouble doubled_space_oracle(const LatticeGeometry &geometry, const FockState &state, const Region &r1,
                             const Region &r2, const DefectSpec &defect, double theta);

/// Permutation of the doubled basis exchanging R1 occupations between the two
/// copies. Entry a * dim + b is the image pair index, or -1 when the swapped
/// pair leaves the fixed-N sector of either copy.
std::vector<long long> swap_permutation(const OccupationBasis &basis, const Region &region);

}  // namespace mbcn

#endif
