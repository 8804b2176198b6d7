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

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.h"
#include "mbcn/bipartition.h"
#include "mbcn/error.h"

namespace mbcn {
namespace {

using testing::kPi;

SparseOperator hofstadter(const LatticeGeometry &g, int n, double flux) {
    HofstadterSpec spec;
    spec.flux = flux;
    return build_hofstadter(g, enumerate_basis(g.n_sites(), n), spec);
}

// Shifted power iteration: slow but shares nothing with the Lanczos code.
double power_iteration_ground_energy(const SparseOperator &h, double shift, int iterations) {
    Rng rng(42);
    CVector v = random_vector(h.dimension(), rng);
    v.normalize();
    CVector w;
    for (int i = 0; i < iterations; ++i) {
        h.apply(v, w);
        v = shift * v - w;
        v.normalize();
    }
    return h.expectation(v).real();
}

TEST(GroundState, TwoSiteDimer) {
    LatticeGeometry g(1, 2, Boundary::Open);
    GroundState gs = ground_state(hofstadter(g, 1, 0.0));
    EXPECT_NEAR(gs.energy, -1.0, 1e-10);
    EXPECT_NEAR(std::abs(gs.state.amplitudes[0]), 1 / std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(std::abs(gs.state.amplitudes[1]), 1 / std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(std::arg(gs.state.amplitudes[0] / gs.state.amplitudes[1]), 0, 1e-8);
}

TEST(GroundState, ZeroOperatorWarnsDegeneracy) {
    LatticeGeometry g(3, 2, Boundary::Open);
    HofstadterSpec spec;
    spec.hopping = 0;
    GroundState gs = ground_state(build_hofstadter(g, enumerate_basis(6, 2), spec));
    EXPECT_NEAR(gs.energy, 0.0, 1e-12);
    EXPECT_TRUE(gs.degeneracy_warning);
}

TEST(GroundState, MatchesDenseOracle) {
    LatticeGeometry g(3, 6, Boundary::Open);
    SparseOperator h = hofstadter(g, 3, 2 * kPi / 3);
    GroundState gs = ground_state(h);
    Eigen::VectorXd ev = testing::dense_spectrum(h);
    EXPECT_NEAR(gs.energy, ev[0], 1e-8);
    EXPECT_NEAR(gs.gap, ev[1] - ev[0], 1e-6);
    CVector r = h.apply(gs.state.amplitudes) - gs.energy * gs.state.amplitudes;
    EXPECT_LE(r.norm(), 1e-8);
    EXPECT_NEAR(gs.state.norm(), 1.0, 1e-12);
}

TEST(GroundState, Benchmark4x6MatchesPowerIteration) {
    LatticeGeometry g(4, 6, Boundary::Open);
    SparseOperator h = hofstadter(g, 4, 2 * kPi / 3);
    GroundState gs = ground_state(h);
    EXPECT_EQ(gs.state.dimension(), 10626u);
    EXPECT_LE(gs.residual, 1e-9);
    EXPECT_FALSE(gs.degeneracy_warning);
    double oracle = power_iteration_ground_energy(h, 16.0, 6000);
    EXPECT_NEAR(gs.energy, oracle, 1e-8);
}

TEST(GroundState, VariationalBound) {
    LatticeGeometry g(3, 4, Boundary::Torus);
    SparseOperator h = hofstadter(g, 3, 2 * kPi / 3);
    GroundState gs = ground_state(h);
    for (uint64_t seed = 0; seed < 20; ++seed) {
        FockState v = testing::random_state(h.basis(), seed);
        EXPECT_LE(gs.energy, h.expectation(v.amplitudes).real() + 1e-12);
    }
}

TEST(LowestEigenpairs, FindsDegeneratePartners) {
    // 2x2 open, one particle: eigenvalues {-2, 0, 0, 2}.
    LatticeGeometry g(2, 2, Boundary::Open);
    EigenPairs p = lowest_eigenpairs(hofstadter(g, 1, 0.0), 3);
    ASSERT_EQ(p.values.size(), 3u);
    EXPECT_NEAR(p.values[0], -2, 1e-9);
    EXPECT_NEAR(p.values[1], 0, 1e-9);
    EXPECT_NEAR(p.values[2], 0, 1e-9);
    EXPECT_NEAR(std::abs(p.vectors[1].dot(p.vectors[2])), 0, 1e-9);
}

TEST(Propagate, TrivialCases) {
    LatticeGeometry g(3, 3, Boundary::Open);
    auto basis = enumerate_basis(9, 2);
    FockState s = testing::random_state(basis, 1);
    HofstadterSpec zero;
    zero.hopping = 0;
    FockState a = propagate(build_hofstadter(g, basis, zero), s, 2.5);
    EXPECT_LE((a.amplitudes - s.amplitudes).norm(), 1e-14);
    FockState b = propagate(hofstadter(g, 2, 1.0), s, 0.0);
    EXPECT_EQ(b.amplitudes, s.amplitudes);
}

TEST(Propagate, RabiOscillation) {
    LatticeGeometry g(1, 2, Boundary::Open);
    auto basis = enumerate_basis(2, 1);
    SparseOperator h = hofstadter(g, 1, 0.0);
    FockState s = FockState::basis_state(basis, 0b01);
    for (double t : {0.3, 1.0, 2.2, 7.5}) {
        FockState out = propagate(h, s, t);
        EXPECT_NEAR(std::abs(out.amplitudes[0]), std::abs(std::cos(t)), 1e-10);
        EXPECT_NEAR(std::abs(out.amplitudes[1]), std::abs(std::sin(t)), 1e-10);
    }
}

TEST(Propagate, MatchesDenseExponential) {
    LatticeGeometry g(3, 4, Boundary::Open);
    SparseOperator h = hofstadter(g, 3, 2 * kPi / 3);
    ASSERT_LE(h.dimension(), 2000u);
    FockState s = testing::random_state(h.basis(), 8);
    const cdouble minus_i(0, -1);
    for (double t : {0.1, 1.0, 4.0}) {
        CMatrix u = (minus_i * t * h.to_dense()).exp();
        FockState out = propagate(h, s, t);
        EXPECT_LE((out.amplitudes - u * s.amplitudes).norm(), 1e-8) << t;
        EXPECT_NEAR(out.norm(), 1.0, 1e-10);
    }
}

TEST(Propagate, ConservesStepEnergy) {
    LatticeGeometry g(4, 4, Boundary::Open);
    QuenchSpec q;
    q.region = Region(g, {1, 1}, 2, 2);
    q.seed = 4;
    auto basis = enumerate_basis(16, 4);
    SparseOperator h = build_quench_step(g, basis, q, 0);
    FockState s = testing::random_state(basis, 2);
    FockState out = propagate(h, s, 1.0);
    EXPECT_NEAR(h.expectation(out.amplitudes).real(), h.expectation(s.amplitudes).real(), 1e-10);
}

TEST(RandomQuench, ZeroStepsIsIdentity) {
    LatticeGeometry g(3, 3, Boundary::Open);
    QuenchSpec q;
    q.region = Region(g, {0, 0}, 2, 2);
    q.steps = 0;
    FockState s = testing::random_state(enumerate_basis(9, 3), 5);
    EXPECT_EQ(apply_random_quench_unitary(s, g, q).amplitudes, s.amplitudes);
}

TEST(RandomQuench, DeterministicAndUnitary) {
    LatticeGeometry g(4, 4, Boundary::Open);
    QuenchSpec q;
    q.region = Region(g, {1, 1}, 2, 2);
    q.seed = 123;
    FockState s = testing::random_state(enumerate_basis(16, 3), 6);
    FockState a = apply_random_quench_unitary(s, g, q);
    FockState b = apply_random_quench_unitary(s, g, q);
    EXPECT_EQ(a.amplitudes, b.amplitudes);
    EXPECT_NEAR(a.norm(), 1.0, 1e-10);
    q.seed = 124;
    EXPECT_GT((apply_random_quench_unitary(s, g, q).amplitudes - a.amplitudes).norm(), 1e-3);
}

TEST(RandomQuench, OutsidePatternWeightsInvariant) {
    LatticeGeometry g(4, 4, Boundary::Open);
    Region r(g, {1, 1}, 2, 2);
    QuenchSpec q;
    q.region = r;
    q.seed = 77;
    auto basis = enumerate_basis(16, 3);
    FockState s = testing::random_state(basis, 9);
    FockState out = apply_random_quench_unitary(s, g, q);
    std::map<Config, double> before, after;
    const auto configs = basis->configs();
    for (size_t i = 0; i < configs.size(); ++i) {
        before[configs[i] & ~r.mask()] += std::norm(s.amplitudes[static_cast<Eigen::Index>(i)]);
        after[configs[i] & ~r.mask()] += std::norm(out.amplitudes[static_cast<Eigen::Index>(i)]);
    }
    for (const auto &[k, v] : before) {
        EXPECT_NEAR(after[k], v, 1e-10);
    }
}

TEST(RandomQuench, SectorUnitaryAgreesWithKrylov) {
    LatticeGeometry g(3, 4, Boundary::Open);
    Region r(g, {0, 1}, 2, 2);
    QuenchSpec q;
    q.region = r;
    q.seed = 31;
    q.steps = 5;
    auto basis = enumerate_basis(12, 3);
    FockState s = testing::random_state(basis, 10);
    FockState krylov = apply_random_quench_unitary(s, g, q);
    Bipartition in = split_state(s, r), out = split_state(krylov, r);
    for (size_t k = 0; k < in.sectors.size(); ++k) {
        CMatrix u = quench_sector_unitary(g, q, in.sectors[k].n_region);
        EXPECT_LE((u * in.sectors[k].amplitudes - out.sectors[k].amplitudes).norm(), 1e-9);
        EXPECT_LE((u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm(), 1e-12);
    }
}

TEST(HermitianExp, MatchesMatrixExponential) {
    Rng rng(3);
    CMatrix a = haar_unitary(5, rng);
    CMatrix h = (a + a.adjoint()) / 2;
    const cdouble minus_i(0, -1);
    EXPECT_LE((hermitian_exp(h, 0.7) - (minus_i * 0.7 * h).exp()).norm(), 1e-12);
}

TEST(Haar, UnitaryAndDeterministic) {
    Rng a(5), b(5);
    CMatrix u = haar_unitary(6, a), v = haar_unitary(6, b);
    EXPECT_EQ(u, v);
    EXPECT_LE((u.adjoint() * u - CMatrix::Identity(6, 6)).norm(), 1e-12);
}

TEST(FramePotential, HaarMatchesHaar) {
    LatticeGeometry g(4, 4, Boundary::Open);
    QuenchSpec q;
    q.region = Region(g, {1, 1}, 2, 2);
    q.seed = 2;
    FramePotential fp = frame_potential_check(g, q, 2, 400, EnsembleKind::Haar);
    EXPECT_EQ(fp.sector_dimension, 6);
    EXPECT_EQ(fp.haar_value, 2.0);
    EXPECT_LT(std::abs(fp.estimate - 2.0), 5 * fp.standard_error + 1e-12);
}

TEST(FramePotential, IdentityEnsembleIsFourthPowerOfDimension) {
    LatticeGeometry g(4, 4, Boundary::Open);
    QuenchSpec q;
    q.region = Region(g, {1, 1}, 2, 2);
    q.steps = 0;
    FramePotential fp = frame_potential_check(g, q, 2, 10);
    EXPECT_NEAR(fp.estimate, std::pow(6.0, 4), 1e-9);
    EXPECT_GT(fp.estimate, 100 * fp.haar_value);
}

TEST(FramePotential, RejectsLargeRegion) {
    LatticeGeometry g(4, 4, Boundary::Open);
    QuenchSpec q;
    q.region = Region(g, {0, 0}, 4, 4);
    try {
        frame_potential_check(g, q, 2, 10);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::Capacity);
    }
}

}  // namespace
}  // namespace mbcn
