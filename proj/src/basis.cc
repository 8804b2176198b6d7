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

#include "mbcn/basis.h"

#include <array>

#include "mbcn/error.h"

namespace mbcn {

namespace {

constexpr size_t kMaxDimension = size_t{1} << 32;

struct BinomialTable {
    std::array<std::array<uint64_t, kMaxSites + 1>, kMaxSites + 1> table{};
    BinomialTable() {
        for (int n = 0; n <= kMaxSites; ++n) {
            table[n][0] = 1;
            for (int k = 1; k <= n; ++k) {
                table[n][k] = table[n - 1][k - 1] + (k <= n - 1 ? table[n - 1][k] : 0);
            }
        }
    }
};

const BinomialTable &binomials() {
    static const BinomialTable t;
    return t;
}

}  // namespace

uint64_t binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n || n > kMaxSites) {
        return 0;
    }
    return binomials().table[n][k];
}

uint64_t combinatorial_rank(Config config) {
    uint64_t r = 0;
    int i = 1;
    while (config) {
        int p = __builtin_ctzll(config);
        r += binomial(p, i);
        config &= config - 1;
        ++i;
    }
    return r;
}

OccupationBasis::OccupationBasis(int n_sites, int n_particles) : n_sites_(n_sites), n_particles_(n_particles) {
    if (n_sites < 0 || n_sites > kMaxSites) {
        throw Error(ErrorKind::Capacity, "site count outside [0, 64]");
    }
    if (n_particles < 0 || n_particles > n_sites) {
        throw Error(ErrorKind::InvalidParticleNumber, "particle number " + std::to_string(n_particles) +
                                                          " outside [0, " + std::to_string(n_sites) + "]");
    }
    uint64_t dim = binomial(n_sites, n_particles);
    if (dim > kMaxDimension) {
        throw Error(ErrorKind::Capacity, "sector dimension " + std::to_string(dim) + " exceeds 2^32");
    }
    configs_.reserve(dim);
    if (n_particles == 0) {
        configs_.push_back(0);
        return;
    }
    // Gosper's hack walks the fixed-popcount masks in increasing numeric order.
    Config c = (n_particles == 64) ? ~Config{0} : (Config{1} << n_particles) - 1;
    for (uint64_t i = 0; i < dim; ++i) {
        configs_.push_back(c);
        if (i + 1 == dim) {
            break;
        }
        Config lowest = c & (~c + 1);
        Config ripple = c + lowest;
        c = (((ripple ^ c) >> 2) / lowest) | ripple;
    }
}

Config OccupationBasis::unrank(size_t index) const {
    if (index >= configs_.size()) {
        throw Error(ErrorKind::InvalidConfiguration, "index " + std::to_string(index) + " out of range");
    }
    return configs_[index];
}

size_t OccupationBasis::rank(Config config) const {
    if (popcount(config) != n_particles_ || (n_sites_ < 64 && (config >> n_sites_) != 0)) {
        throw Error(ErrorKind::InvalidConfiguration, "configuration does not belong to this basis");
    }
    return static_cast<size_t>(combinatorial_rank(config));
}

BasisPtr enumerate_basis(int n_sites, int n_particles) {
    return std::make_shared<const OccupationBasis>(n_sites, n_particles);
}

Config restrict_to(Config config, const Region &region) {
    Config out = 0;
    const auto &sites = region.sites();
    for (size_t j = 0; j < sites.size(); ++j) {
        out |= ((config >> sites[j]) & 1) << j;
    }
    return out;
}

FockState::FockState(BasisPtr basis_, CVector amplitudes_) : basis(std::move(basis_)), amplitudes(std::move(amplitudes_)) {
    if (static_cast<size_t>(amplitudes.size()) != basis->dimension()) {
        throw Error(ErrorKind::InvalidSpec, "amplitude vector length does not match basis dimension");
    }
}

FockState FockState::basis_state(BasisPtr basis, Config config) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->dimension()));
    v(static_cast<Eigen::Index>(basis->rank(config))) = 1.0;
    return FockState(std::move(basis), std::move(v));
}

void FockState::normalize() {
    double n = amplitudes.norm();
    if (n > 0) {
        amplitudes /= n;
    }
}

cdouble inner(const FockState &bra, const FockState &ket) {
    return bra.amplitudes.dot(ket.amplitudes);
}

}  // namespace mbcn
