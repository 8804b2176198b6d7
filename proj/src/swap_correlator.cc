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

#include "mbcn/swap_correlator.h"

#include <map>

#include "mbcn/bipartition.h"
#include "mbcn/error.h"

namespace mbcn {

namespace {

void check_regions(const Region &r1, const Region &r2, const DefectSpec &defect) {
    if (r1.overlaps(r2)) {
        throw Error(ErrorKind::RegionOverlap, "regions " + r1.describe() + " and " + r2.describe() + " overlap");
    }
    if ((defect.region.mask() & ~r1.mask()) != 0) {
        throw Error(ErrorKind::InvalidSpec, "the polarization defect must be supported inside R1");
    }
    defect.validate();
}

}  // namespace

SwapCorrelator::SwapCorrelator(const LatticeGeometry &geometry, const FockState &state, const Region &r1,
                               const Region &r2, const DefectSpec &defect) {
    check_regions(r1, r2, defect);
    if (r1.size() > 24) {
        throw Error(ErrorKind::Capacity, "R1 has more than 24 sites");
    }
    const int max_k = r2.size();
    moments_ = CMatrix::Zero(max_k + 1, max_k + 1);
    Bipartition bp = split_state(state, r1);
    for (const SectorBlock &block : bp.sectors) {
        const auto d = block.amplitudes.rows();
        Eigen::VectorXcd phase(d);
        auto local = enumerate_basis(r1.size(), block.n_region);
        for (Eigen::Index r = 0; r < d; ++r) {
            phase[r] = v_phase(geometry, defect, embed_pattern(local->unrank(static_cast<size_t>(r)), r1));
        }
        std::vector<std::vector<Eigen::Index>> columns(static_cast<size_t>(max_k + 1));
        for (size_t c = 0; c < block.complement.size(); ++c) {
            columns[static_cast<size_t>(particles_in_region(block.complement[c], r2))].push_back(
                static_cast<Eigen::Index>(c));
        }
        std::vector<CMatrix> reduced(static_cast<size_t>(max_k + 1));
        CMatrix rho = CMatrix::Zero(d, d);
        for (int k = 0; k <= max_k; ++k) {
            const auto &cols = columns[static_cast<size_t>(k)];
            CMatrix sub(d, static_cast<Eigen::Index>(cols.size()));
            for (size_t j = 0; j < cols.size(); ++j) {
                sub.col(static_cast<Eigen::Index>(j)) = block.amplitudes.col(cols[j]);
            }
            reduced[static_cast<size_t>(k)] = sub * sub.adjoint();
            rho += reduced[static_cast<size_t>(k)];
        }
        purity_ += rho.cwiseProduct(rho.transpose()).sum().real();
        for (int j = 0; j <= max_k; ++j) {
            CMatrix dressed = phase.asDiagonal() * reduced[static_cast<size_t>(j)] * phase.conjugate().asDiagonal();
            for (int k = 0; k <= max_k; ++k) {
                moments_(j, k) += dressed.cwiseProduct(reduced[static_cast<size_t>(k)].transpose()).sum();
            }
        }
    }
}

cdouble SwapCorrelator::operator()(double theta) const {
    cdouble total = 0;
    for (Eigen::Index j = 0; j < moments_.rows(); ++j) {
        for (Eigen::Index k = 0; k < moments_.cols(); ++k) {
            total += moments_(j, k) * std::polar(1.0, theta * static_cast<double>(j - k));
        }
    }
    return total;
}

std::vector<cdouble> SwapCorrelator::evaluate(std::span<const double> grid) const {
    std::vector<cdouble> out;
    out.reserve(grid.size());
    for (double theta : grid) {
        out.push_back((*this)(theta));
    }
    return out;
}

std::vector<cdouble> swap_T(const LatticeGeometry &geometry, const FockState &state, const Region &r1,
                            const Region &r2, const DefectSpec &defect, std::span<const double> grid) {
    return SwapCorrelator(geometry, state, r1, r2, defect).evaluate(grid);
}

std::vector<long long> swap_permutation(const OccupationBasis &basis, const Region &region) {
    const size_t dim = basis.dimension();
    if (static_cast<double>(dim) * static_cast<double>(dim) > 1e7) {
        throw Error(ErrorKind::Capacity, "doubled space exceeds 1e7 amplitudes");
    }
    const Config m = region.mask();
    const auto configs = basis.configs();
    std::vector<long long> perm(dim * dim, -1);
    for (size_t a = 0; a < dim; ++a) {
        for (size_t b = 0; b < dim; ++b) {
            Config sa = (configs[a] & ~m) | (configs[b] & m);
            Config sb = (configs[b] & ~m) | (configs[a] & m);
            if (popcount(sa) != basis.n_particles() || popcount(sb) != basis.n_particles()) {
                continue;
            }
            perm[a * dim + b] = static_cast<long long>(basis.rank(sa) * dim + basis.rank(sb));
        }
    }
    return perm;
}

cdouble doubled_space_oracle(const LatticeGeometry &geometry, const FockState &state, const Region &r1,
                             const Region &r2, const DefectSpec &defect, double theta) {
    check_regions(r1, r2, defect);
    const OccupationBasis &basis = *state.basis;
    const size_t dim = basis.dimension();
    std::vector<long long> perm = swap_permutation(basis, r1);
    const auto configs = basis.configs();

    std::vector<cdouble> v(dim), w(dim);
    for (size_t a = 0; a < dim; ++a) {
        v[a] = v_phase(geometry, defect, configs[a]);
        w[a] = std::polar(1.0, theta * particles_in_region(configs[a], r2));
    }
    // ket = W_{R2,A} V_{R1,A} |psi>|psi>;  bra = <psi|<psi| V^dag_{R1,A} W^dag_{R2,B}.
    std::vector<cdouble> ket(dim * dim), bra_conj(dim * dim);
    for (size_t a = 0; a < dim; ++a) {
        const cdouble pa = state.amplitudes[static_cast<Eigen::Index>(a)];
        for (size_t b = 0; b < dim; ++b) {
            const cdouble pb = state.amplitudes[static_cast<Eigen::Index>(b)];
            ket[a * dim + b] = w[a] * v[a] * pa * pb;
            bra_conj[a * dim + b] = w[b] * v[a] * pa * pb;
        }
    }
    cdouble total = 0;
    for (size_t i = 0; i < dim * dim; ++i) {
        if (perm[i] >= 0) {
            total += std::conj(bra_conj[static_cast<size_t>(perm[i])]) * ket[i];
        }
    }
    return total;
}

}  // namespace mbcn
