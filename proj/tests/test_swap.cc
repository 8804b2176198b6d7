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

#include <gtest/gtest.h>

#include "helpers.h"
#include "mbcn/chern.h"
#include "mbcn/error.h"
#include "mbcn/swap_correlator.h"

namespace mbcn {
namespace {

using testing::kPi;

struct Placement {
    Region r1;
    Region r2;
};

std::vector<Placement> placements_2x3(const LatticeGeometry &g) {
    return {{Region(g, {0, 0}, 1, 2), Region(g, {1, 0}, 1, 2)},
            {Region(g, {1, 1}, 1, 2), Region(g, {0, 0}, 1, 3)},
            {Region(g, {0, 1}, 2, 1), Region(g, {0, 2}, 1, 1)}};
}

TEST(Swap, MatchesDoubledSpaceOracle) {
    LatticeGeometry g(2, 3, Boundary::Open);
    FockState gs = testing::hofstadter_ground_state(g, 2, 2 * kPi / 3);
    auto grid = theta_grid(16);
    for (const auto &p : placements_2x3(g)) {
        for (int s : {1, 2}) {
            DefectSpec d = region_defect(p.r1, s);
            d.ell_y = 3;
            auto fast = swap_T(g, gs, p.r1, p.r2, d, grid);
            for (size_t i = 0; i < grid.size(); ++i) {
                EXPECT_NEAR(std::abs(fast[i] - doubled_space_oracle(g, gs, p.r1, p.r2, d, grid[i])), 0, 1e-10);
            }
        }
    }
}

TEST(Swap, RandomStatesMatchOracle) {
    LatticeGeometry g(3, 3, Boundary::Open);
    Region r1(g, {0, 0}, 2, 2), r2(g, {2, 0}, 1, 3);
    DefectSpec d = region_defect(r1, 1);
    d.ell_y = 3;
    d.y_origin = 1;
    for (uint64_t seed : {1, 2}) {
        FockState s = testing::random_state(enumerate_basis(9, 3), seed);
        for (double theta : {0.0, 0.9, 4.1}) {
            EXPECT_NEAR(std::abs(SwapCorrelator(g, s, r1, r2, d)(theta) -
                                 doubled_space_oracle(g, s, r1, r2, d, theta)),
                        0, 1e-10);
        }
    }
}

// Literal placement: W^dag on copy A and W on copy B, built independently of the library.
cdouble literal_placement(const FockState &psi, const LatticeGeometry &g, const Region &r1, const Region &r2,
                          const DefectSpec &d, double theta) {
    const auto &basis = *psi.basis;
    const size_t dim = basis.dimension();
    auto perm = swap_permutation(basis, r1);
    cdouble total = 0;
    for (size_t a = 0; a < dim; ++a) {
        for (size_t b = 0; b < dim; ++b) {
            if (perm[a * dim + b] < 0) continue;
            const size_t sa = static_cast<size_t>(perm[a * dim + b]) / dim;
            const size_t sb = static_cast<size_t>(perm[a * dim + b]) % dim;
            const Config ca = basis.unrank(a), cb = basis.unrank(b);
            const Config csa = basis.unrank(sa), csb = basis.unrank(sb);
            cdouble ket = std::polar(1.0, -theta * particles_in_region(ca, r2)) * v_phase(g, d, ca) *
                          psi.amplitudes[static_cast<Eigen::Index>(a)] * psi.amplitudes[static_cast<Eigen::Index>(b)];
            cdouble bra = std::polar(1.0, -theta * particles_in_region(csb, r2)) * v_phase(g, d, csa) *
                          psi.amplitudes[static_cast<Eigen::Index>(sa)] *
                          psi.amplitudes[static_cast<Eigen::Index>(sb)];
            total += std::conj(bra) * ket;
        }
    }
    return total;
}

TEST(Swap, LiteralPlacementIsMirroredTheta) {
    LatticeGeometry g(2, 3, Boundary::Open);
    FockState gs = testing::hofstadter_ground_state(g, 2, 2 * kPi / 3);
    Region r1(g, {0, 0}, 1, 2), r2(g, {1, 0}, 1, 2);
    DefectSpec d = region_defect(r1, 1);
    d.ell_y = 3;
    SwapCorrelator sc(g, gs, r1, r2, d);
    for (double theta : {0.4, 1.7, 3.0}) {
        EXPECT_NEAR(std::abs(literal_placement(gs, g, r1, r2, d, theta) - sc(-theta)), 0, 1e-10);
    }
}

TEST(Swap, ThetaZeroWithoutDefectIsPurity) {
    LatticeGeometry g(3, 4, Boundary::Open);
    FockState gs = testing::hofstadter_ground_state(g, 3, 2 * kPi / 3);
    Region r1(g, {0, 1}, 2, 2), r2(g, {2, 1}, 1, 2);
    DefectSpec d = region_defect(r1, 2);  // all phases multiples of 2 pi
    SwapCorrelator sc(g, gs, r1, r2, d);
    EXPECT_NEAR(std::abs(sc(0.0) - cdouble(sc.purity())), 0, 1e-12);
    EXPECT_GT(sc.purity(), 0.0);
    EXPECT_LE(sc.purity(), 1.0 + 1e-12);
}

TEST(Swap, ProductStateHasUnitModulus) {
    LatticeGeometry g(3, 4, Boundary::Open);
    Region r1(g, {0, 0}, 2, 2), r2(g, {2, 0}, 1, 3);
    auto basis = enumerate_basis(12, 3);
    Config c = (Config{1} << g.index(0, 1)) | (Config{1} << g.index(2, 2)) | (Config{1} << g.index(1, 3));
    FockState s = FockState::basis_state(basis, c);
    DefectSpec d = region_defect(r1, 1);
    auto vals = swap_T(g, s, r1, r2, d, theta_grid(24));
    for (cdouble v : vals) {
        EXPECT_NEAR(std::abs(v), 1.0, 1e-12);
    }
    EXPECT_EQ(winding_number(vals).winding, 0);
}

TEST(Swap, WholeLatticeSwapOfIdenticalCopiesIsOne) {
    LatticeGeometry g(2, 3, Boundary::Open);
    auto basis = enumerate_basis(6, 2);
    FockState s = testing::random_state(basis, 4);
    auto perm = swap_permutation(*basis, whole_lattice(g));
    const size_t dim = basis->dimension();
    cdouble total = 0;
    for (size_t i = 0; i < dim * dim; ++i) {
        ASSERT_GE(perm[i], 0);
        const size_t j = static_cast<size_t>(perm[i]);
        total += std::conj(s.amplitudes[static_cast<Eigen::Index>(j / dim)] *
                           s.amplitudes[static_cast<Eigen::Index>(j % dim)]) *
                 s.amplitudes[static_cast<Eigen::Index>(i / dim)] * s.amplitudes[static_cast<Eigen::Index>(i % dim)];
    }
    EXPECT_NEAR(std::abs(total - cdouble(1)), 0, 1e-12);
}

TEST(Swap, PermutationIsInvolution) {
    LatticeGeometry g(2, 3, Boundary::Open);
    auto basis = enumerate_basis(6, 3);
    auto perm = swap_permutation(*basis, Region(g, {0, 0}, 2, 1));
    for (size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] >= 0) {
            EXPECT_EQ(perm[static_cast<size_t>(perm[i])], static_cast<long long>(i));
        }
    }
}

TEST(Swap, RejectsOverlapAndOversizedOracle) {
    LatticeGeometry g(3, 3, Boundary::Open);
    FockState s = testing::random_state(enumerate_basis(9, 2), 1);
    Region a(g, {0, 0}, 2, 2), b(g, {1, 1}, 2, 2);
    try {
        swap_T(g, s, a, b, region_defect(a, 1), theta_grid(8));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::RegionOverlap);
    }
    LatticeGeometry big(4, 6, Boundary::Open);
    FockState t = testing::random_state(enumerate_basis(24, 4), 1);
    Region r1(big, {0, 0}, 2, 2), r2(big, {2, 0}, 2, 2);
    try {
        doubled_space_oracle(big, t, r1, r2, region_defect(r1, 1), 0.0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Capacity);
    }
}

TEST(Swap, ConjugateSymmetryWithoutDefect) {
    LatticeGeometry g(3, 4, Boundary::Open);
    FockState gs = testing::hofstadter_ground_state(g, 3, 2 * kPi / 3);
    Region r1(g, {0, 1}, 1, 2), r2(g, {1, 1}, 2, 2);
    SwapCorrelator sc(g, gs, r1, r2, region_defect(r1, 2));
    for (double theta : {0.3, 1.1, 2.5}) {
        EXPECT_NEAR(std::abs(sc(-theta) - std::conj(sc(theta))), 0, 1e-12);
        EXPECT_NEAR(sc(theta).imag(), 0, 1e-12);
    }
}

TEST(Swap, WindingInvariantUnderOriginShift) {
    LatticeGeometry g(4, 6, Boundary::Open);
    FockState gs = ground_state(build_hofstadter(g, enumerate_basis(24, 4), [] {
                                    HofstadterSpec h;
                                    h.flux = 2 * kPi / 3;
                                    return h;
                                }()))
                       .state;
    Region r1(g, {1, 0}, 1, 6), r2(g, {2, 0}, 1, 6);
    auto grid = theta_grid(24);
    DefectSpec d = region_defect(r1, 2);
    int base = winding_number(swap_T(g, gs, r1, r2, d, grid)).winding;
    for (int shift : {-2, 1, 3}) {
        DefectSpec moved = d;
        moved.y_origin += shift;
        auto vals = swap_T(g, gs, r1, r2, moved, grid);
        EXPECT_EQ(winding_number(vals).winding, base);
    }
}

TEST(Swap, AreaSuppression) {
    LatticeGeometry g(4, 6, Boundary::Open);
    HofstadterSpec h;
    h.flux = 2 * kPi / 3;
    FockState gs = ground_state(build_hofstadter(g, enumerate_basis(24, 4), h)).state;
    auto grid = theta_grid(24);
    double previous = 2;
    for (int ly : {2, 3, 4}) {
        Region r1(g, {0, 1}, 2, ly), r2(g, {2, 1}, 2, ly);
        auto vals = swap_T(g, gs, r1, r2, region_defect(r1, 1), grid);
        double mn = 1e9;
        for (cdouble v : vals) mn = std::min(mn, std::abs(v));
        EXPECT_LT(mn, previous) << ly;
        previous = mn;
    }
}

}  // namespace
}  // namespace mbcn
