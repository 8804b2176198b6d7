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
#include "mbcn/error.h"

namespace mbcn {
namespace {

using testing::kPi;

// Phase of the amplitude for one hop i -> j in the single-particle sector.
cdouble hop(const CMatrix &h, int from, int to) {
    return -h(to, from);
}

cdouble plaquette(const LatticeGeometry &g, const CMatrix &h, int x, int y) {
    const int x1 = (x + 1) % g.n_x, y1 = (y + 1) % g.n_y;
    return hop(h, g.index(x, y), g.index(x1, y)) * hop(h, g.index(x1, y), g.index(x1, y1)) *
           hop(h, g.index(x1, y1), g.index(x, y1)) * hop(h, g.index(x, y1), g.index(x, y));
}

CMatrix single_particle(const LatticeGeometry &g, const HofstadterSpec &spec) {
    return build_hofstadter(g, enumerate_basis(g.n_sites(), 1), spec).to_dense();
}

TEST(Hofstadter, FourCycleSpectrum) {
    LatticeGeometry g(2, 2, Boundary::Open);
    HofstadterSpec spec;
    Eigen::VectorXd ev = testing::dense_spectrum(build_hofstadter(g, enumerate_basis(4, 1), spec));
    ASSERT_EQ(ev.size(), 4);
    EXPECT_NEAR(ev[0], -2, 1e-12);
    EXPECT_NEAR(ev[1], 0, 1e-12);
    EXPECT_NEAR(ev[2], 0, 1e-12);
    EXPECT_NEAR(ev[3], 2, 1e-12);
}

TEST(Hofstadter, ZeroHoppingIsZeroOperator) {
    LatticeGeometry g(3, 3, Boundary::Torus);
    HofstadterSpec spec;
    spec.hopping = 0;
    spec.flux = 2 * kPi / 3;
    EXPECT_EQ(build_hofstadter(g, enumerate_basis(9, 2), spec).nonzeros(), 0u);
}

TEST(Hofstadter, PlaquetteFluxOpen) {
    LatticeGeometry g(4, 5, Boundary::Open);
    HofstadterSpec spec;
    spec.flux = 2 * kPi / 3;
    CMatrix h = single_particle(g, spec);
    for (int y = 0; y + 1 < g.n_y; ++y) {
        for (int x = 0; x + 1 < g.n_x; ++x) {
            cdouble p = plaquette(g, h, x, y);
            EXPECT_NEAR(std::abs(p - std::polar(1.0, -spec.flux)), 0, 1e-12) << x << "," << y;
        }
    }
}

TEST(Hofstadter, PlaquetteFluxTorusIncludingSeams) {
    LatticeGeometry g(3, 4, Boundary::Torus);
    HofstadterSpec spec;
    spec.flux = 2 * kPi / 3;
    spec.twist_x = 0.4;
    spec.twist_y = -1.1;
    CMatrix h = single_particle(g, spec);
    for (int y = 0; y < g.n_y; ++y) {
        for (int x = 0; x < g.n_x; ++x) {
            EXPECT_NEAR(std::abs(plaquette(g, h, x, y) - std::polar(1.0, -spec.flux)), 0, 1e-12) << x << "," << y;
        }
    }
}

TEST(Hofstadter, TwistEntersBoundaryHop) {
    LatticeGeometry g(3, 2, Boundary::CylinderX);
    HofstadterSpec spec;
    spec.twist_x = 0.7;
    CMatrix h = single_particle(g, spec);
    // hop (n_x - 1, 0) -> (0, 0)
    EXPECT_NEAR(std::abs(hop(h, g.index(2, 0), g.index(0, 0)) - std::polar(1.0, 0.7)), 0, 1e-14);
}

TEST(Hofstadter, Hermitian) {
    for (auto boundary : {Boundary::Open, Boundary::CylinderX, Boundary::Torus}) {
        LatticeGeometry g(3, 4, boundary);
        HofstadterSpec spec;
        spec.flux = 2 * kPi / 3;
        if (boundary != Boundary::Open) {
            spec.twist_x = 0.3;
        }
        if (boundary == Boundary::Torus) {
            spec.twist_y = 1.9;
        }
        SparseOperator h = build_hofstadter(g, enumerate_basis(12, 3), spec);
        EXPECT_TRUE(h.hermitian());
        EXPECT_LE(h.hermiticity_error(), 1e-12);
    }
}

TEST(Hofstadter, ConservesParticleNumber) {
    LatticeGeometry g(3, 3, Boundary::Torus);
    HofstadterSpec spec;
    spec.flux = 2 * kPi / 3;
    auto basis = enumerate_basis(9, 3);
    SparseOperator h = build_hofstadter(g, basis, spec);
    const auto configs = basis->configs();
    for (size_t r = 0; r < h.dimension(); ++r) {
        for (size_t k = h.row_ptr()[r]; k < h.row_ptr()[r + 1]; ++k) {
            Config a = configs[r], b = configs[h.col_idx()[k]];
            EXPECT_EQ(popcount(a), popcount(b));
            EXPECT_EQ(popcount(a ^ b), 2);  // exactly one particle moved
        }
    }
}

TEST(Hofstadter, RejectsIncommensurateTorus) {
    LatticeGeometry g(4, 4, Boundary::Torus);
    HofstadterSpec spec;
    spec.flux = 2 * kPi / 3;
    try {
        build_hofstadter(g, enumerate_basis(16, 2), spec);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::FluxCommensurability);
    }
}

TEST(Hofstadter, RejectsTwistOnOpenLattice) {
    LatticeGeometry g(3, 3, Boundary::Open);
    HofstadterSpec spec;
    spec.twist_x = 0.1;
    try {
        build_hofstadter(g, enumerate_basis(9, 1), spec);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidSpec);
    }
}

TEST(Hofstadter, GaugeOriginShiftPreservesSpectrum) {
    for (auto boundary : {Boundary::Open, Boundary::CylinderX}) {
        LatticeGeometry g(3, 4, boundary);
        HofstadterSpec a;
        a.flux = 2 * kPi / 3;
        HofstadterSpec b = a;
        b.landau_origin = 1;
        auto basis = enumerate_basis(12, 3);
        Eigen::VectorXd ea = testing::dense_spectrum(build_hofstadter(g, basis, a));
        Eigen::VectorXd eb = testing::dense_spectrum(build_hofstadter(g, basis, b));
        EXPECT_LE((ea - eb).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Hofstadter, TorusSpectrumPeriodicInTwists) {
    LatticeGeometry g(3, 3, Boundary::Torus);
    auto basis = enumerate_basis(9, 2);
    HofstadterSpec a;
    a.flux = 2 * kPi / 3;
    a.twist_x = 0.37;
    a.twist_y = 1.21;
    Eigen::VectorXd base = testing::dense_spectrum(build_hofstadter(g, basis, a));
    for (auto [dx, dy] : {std::pair{1, 0}, {0, 1}, {1, 1}}) {
        HofstadterSpec b = a;
        b.twist_x += 2 * kPi * dx;
        b.twist_y += 2 * kPi * dy;
        Eigen::VectorXd e = testing::dense_spectrum(build_hofstadter(g, basis, b));
        EXPECT_LE((e - base).cwiseAbs().maxCoeff(), 1e-10);
    }
    HofstadterSpec c = a;
    c.twist_x += 1.0;
    Eigen::VectorXd moved = testing::dense_spectrum(build_hofstadter(g, basis, c));
    EXPECT_GT((moved - base).cwiseAbs().maxCoeff(), 1e-6);
}

QuenchSpec quench_on(const Region &r, uint64_t seed) {
    QuenchSpec q;
    q.region = r;
    q.seed = seed;
    return q;
}

TEST(Quench, ZeroParametersGiveZeroOperator) {
    LatticeGeometry g(4, 4, Boundary::Open);
    QuenchSpec q = quench_on(Region(g, {1, 1}, 2, 2), 5);
    q.hopping = 0;
    q.disorder = 0;
    EXPECT_EQ(build_quench_step(g, enumerate_basis(16, 3), q, 0).nonzeros(), 0u);
}

TEST(Quench, SingleSiteRegionIsDiagonal) {
    LatticeGeometry g(3, 3, Boundary::Open);
    Region r(g, {1, 1}, 1, 1);
    QuenchSpec q = quench_on(r, 11);
    auto basis = enumerate_basis(9, 2);
    SparseOperator h = build_quench_step(g, basis, q, 3);
    EXPECT_TRUE(h.is_diagonal());
    const double delta = quench_disorder(11, 3, 0, 1.0);
    CMatrix d = h.to_dense();
    for (size_t i = 0; i < basis->dimension(); ++i) {
        double expect = (basis->unrank(i) & r.mask()) ? delta : 0.0;
        EXPECT_NEAR(d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real(), expect, 1e-15);
    }
}

TEST(Quench, DeterministicPerSeedAndStep) {
    LatticeGeometry g(4, 4, Boundary::Open);
    auto basis = enumerate_basis(16, 3);
    QuenchSpec q = quench_on(Region(g, {0, 1}, 2, 2), 99);
    SparseOperator a = build_quench_step(g, basis, q, 4), b = build_quench_step(g, basis, q, 4);
    EXPECT_EQ(a.values(), b.values());
    EXPECT_EQ(a.col_idx(), b.col_idx());
    SparseOperator c = build_quench_step(g, basis, q, 5);
    EXPECT_NE(a.values(), c.values());
    EXPECT_EQ(quench_disorder(99, 4, 5, 1.0), quench_disorder(99, 4, 5, 1.0));
}

TEST(Quench, DisorderStatistics) {
    double sum = 0, sq = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double v = quench_disorder(7, i / 16, i % 16, 1.5);
        sum += v;
        sq += v * v;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.05);
    EXPECT_NEAR(std::sqrt(sq / n), 1.5, 0.05);
}

TEST(Quench, SupportedInsideRegion) {
    LatticeGeometry g(4, 4, Boundary::Open);
    Region r(g, {1, 0}, 2, 3);
    auto basis = enumerate_basis(16, 4);
    SparseOperator h = build_quench_step(g, basis, quench_on(r, 1), 0);
    EXPECT_LE(h.hermiticity_error(), 1e-12);
    const auto configs = basis->configs();
    for (size_t row = 0; row < h.dimension(); ++row) {
        for (size_t k = h.row_ptr()[row]; k < h.row_ptr()[row + 1]; ++k) {
            EXPECT_EQ(configs[row] & ~r.mask(), configs[h.col_idx()[k]] & ~r.mask());
        }
    }
}

TEST(Quench, SectorMatrixMatchesFullOperator) {
    // One particle outside R1 spectates; the R1 block must equal the sector matrix.
    LatticeGeometry g(3, 3, Boundary::Open);
    Region r(g, {0, 0}, 2, 2);
    QuenchSpec q = quench_on(r, 17);
    auto basis = enumerate_basis(9, 3);
    CMatrix full = build_quench_step(g, basis, q, 2).to_dense();
    CMatrix local = quench_step_sector_matrix(g, q, 2, 2);
    auto lb = enumerate_basis(4, 2);
    const Config spectator = Config{1} << g.index(2, 2);
    for (size_t i = 0; i < lb->dimension(); ++i) {
        for (size_t j = 0; j < lb->dimension(); ++j) {
            Config ci = spectator, cj = spectator;
            for (int k = 0; k < 4; ++k) {
                if ((lb->unrank(i) >> k) & 1) ci |= Config{1} << r.sites()[static_cast<size_t>(k)];
                if ((lb->unrank(j) >> k) & 1) cj |= Config{1} << r.sites()[static_cast<size_t>(k)];
            }
            EXPECT_NEAR(std::abs(full(static_cast<Eigen::Index>(basis->rank(ci)),
                                      static_cast<Eigen::Index>(basis->rank(cj))) -
                                 local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))),
                        0, 1e-14);
        }
    }
}

}  // namespace
}  // namespace mbcn
