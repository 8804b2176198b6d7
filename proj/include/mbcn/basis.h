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

#ifndef MBCN_BASIS_H
#define MBCN_BASIS_H

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mbcn/lattice.h"

namespace mbcn {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

uint64_t binomial(int n, int k);

inline int popcount(Config c) {
    return __builtin_popcountll(c);
}

/// All hardcore-boson configurations with a fixed particle number, stored in
/// increasing bitmask order. Ranking uses the combinatorial number system, so
/// index lookup needs no hash table.
class OccupationBasis {
   public:
    OccupationBasis(int n_sites, int n_particles);

    int n_sites() const {
        return n_sites_;
    }
    int n_particles() const {
        return n_particles_;
    }
    size_t dimension() const {
        return configs_.size();
    }
    Config unrank(size_t index) const;
    size_t rank(Config config) const;
    std::span<const Config> configs() const {
        return configs_;
    }

   private:
    int n_sites_;
    int n_particles_;
    std::vector<Config> configs_;
};

using BasisPtr = std::shared_ptr<const OccupationBasis>;

BasisPtr enumerate_basis(int n_sites, int n_particles);

/// Combinatorial rank of `config` among all configurations with the same
/// popcount on an unbounded number of sites.
uint64_t combinatorial_rank(Config config);

inline int particles_in_region(Config config, const Region &region) {
    return popcount(config & region.mask());
}

/// Occupation pattern on the region's sites: bit j is the occupation of region.sites()[j].
Config restrict_to(Config config, const Region &region);

/// Complex amplitudes over an OccupationBasis.
struct FockState {
    BasisPtr basis;
    CVector amplitudes;

    FockState() = default;
    FockState(BasisPtr basis, CVector amplitudes);

    static FockState basis_state(BasisPtr basis, Config config);

    double norm() const {
        return amplitudes.norm();
    }
    void normalize();
    size_t dimension() const {
        return static_cast<size_t>(amplitudes.size());
    }
};

cdouble inner(const FockState &bra, const FockState &ket);

}  // namespace mbcn

#endif
