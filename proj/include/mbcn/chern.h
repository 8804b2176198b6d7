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

#ifndef MBCN_CHERN_H
#define MBCN_CHERN_H

#include <span>
#include <vector>

#include "mbcn/evolution.h"

namespace mbcn {

/// n uniform points 2 pi k / n on [0, 2 pi).
std::vector<double> theta_grid(int points);

struct WindingResult {
    int winding = 0;
    /// Largest |phase step| between neighboring grid points.
    double max_jump = 0;
    bool aliasing_warning = false;
};

/// Winding of arg(values) around a closed uniform grid: phase steps are taken on
/// the principal branch and summed around the cycle.
WindingResult winding_number(std::span<const cdouble> values, double amplitude_floor = 1e-12);

struct FitResult {
    int chern = 0;
    cdouble amplitude;
    /// Offset coefficients, one per entry of the offset harmonic list.
    std::vector<cdouble> offset;
    double residual = 0;
    int runner_up = 0;
    double runner_up_residual = 0;
};

/// Least-squares fit of a exp(i C theta) + sum_h c_h exp(i h theta) for every
/// candidate C, returning the best one. The default offset is a single
/// constant (h = 0); candidates that coincide with an offset harmonic are skipped.
/// Throws ErrorKind::AmbiguousFit when the runner-up residual is within 1%.
FitResult fit_depolarized(std::span<const cdouble> values, std::span<const double> grid,
                          std::span<const int> candidates = {}, std::span<const int> offset_harmonics = {});

struct TwistScan {
    int chern = 0;
    std::vector<double> grid;
    std::vector<cdouble> values;
    /// Relative spectral gap above the tracked state(s) at every grid point.
    std::vector<double> gaps;
    double max_jump = 0;
};

/// Relative gap below which twist scans refuse to continue.
constexpr double kDegeneracyThreshold = 1e-8;

/// Winding of the whole-system polarization expectation of the ground state
/// under a twist theta_x applied on the boundary x bonds.
TwistScan resta_chern(const LatticeGeometry &geometry, const HofstadterSpec &spec, int n_particles, int s,
                      std::span<const double> grid, double tol = 1e-9);

struct BerryResult {
    int chern = 0;
    /// Sum of plaquette phases / 2 pi before rounding.
    double raw = 0;
    double max_plaquette = 0;
    double min_link = 0;
    double min_gap = 0;
};

/// Discretized Berry curvature over the twist torus [0, 2pi)^2. The tracked
/// object is the span of the `multiplet` lowest states: links are the unit-modulus
/// determinants of their overlap matrices, so a single state is the multiplet = 1 case.
/// phi_x runs over [0, 2 pi s), phi_y over [0, 2 pi).
BerryResult berry_chern(const LatticeGeometry &geometry, const HofstadterSpec &spec, int n_particles, int s,
                        int steps_x, int steps_y, double tol = 1e-9, int multiplet = 1);

/// Same invariant from precomputed multiplets on a steps_x by steps_y grid,
/// indexed [ix * steps_y + iy]. Exposed for gauge-invariance testing.
BerryResult berry_from_states(const std::vector<std::vector<CVector>> &states, int steps_x, int steps_y);

}  // namespace mbcn

#endif
