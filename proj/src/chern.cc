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

#include "mbcn/chern.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mbcn/defect_ops.h"
#include "mbcn/error.h"

namespace mbcn {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double relative_gap(double lower, double upper) {
    return (upper - lower) / std::max(1.0, std::abs(lower));
}

}  // namespace

std::vector<double> theta_grid(int points) {
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(std::max(points, 0)));
    for (int k = 0; k < points; ++k) {
        grid.push_back(kTwoPi * k / points);
    }
    return grid;
}

WindingResult winding_number(std::span<const cdouble> values, double amplitude_floor) {
    if (values.size() < 8) {
        throw Error(ErrorKind::InvalidSpec, "winding needs at least 8 grid points");
    }
    for (size_t i = 0; i < values.size(); ++i) {
        if (std::abs(values[i]) <= amplitude_floor) {
            throw Error(ErrorKind::VanishingAmplitude, "correlator amplitude vanishes at grid point " +
                                                            std::to_string(i));
        }
    }
    WindingResult out;
    double total = 0;
    for (size_t i = 0; i < values.size(); ++i) {
        double step = std::arg(values[(i + 1) % values.size()] / values[i]);
        total += step;
        out.max_jump = std::max(out.max_jump, std::abs(step));
    }
    out.winding = static_cast<int>(std::lround(total / kTwoPi));
    out.aliasing_warning = out.max_jump > std::numbers::pi / 2;
    return out;
}

FitResult fit_depolarized(std::span<const cdouble> values, std::span<const double> grid,
                          std::span<const int> candidates, std::span<const int> offset_harmonics) {
    if (values.size() != grid.size() || values.size() < 8) {
        throw Error(ErrorKind::InvalidSpec, "fit needs matching value and grid arrays of at least 8 points");
    }
    static const int kDefaultCandidates[] = {-3, -2, -1, 0, 1, 2, 3};
    static const int kDefaultOffset[] = {0};
    if (candidates.empty()) {
        candidates = kDefaultCandidates;
    }
    if (offset_harmonics.empty()) {
        offset_harmonics = kDefaultOffset;
    }
    const auto n = static_cast<Eigen::Index>(values.size());
    Eigen::VectorXcd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y[i] = values[static_cast<size_t>(i)];
    }
    struct Candidate {
        int c;
        double residual;
        Eigen::VectorXcd coeff;
    };
    std::vector<Candidate> fits;
    for (int c : candidates) {
        if (std::find(offset_harmonics.begin(), offset_harmonics.end(), c) != offset_harmonics.end()) {
            continue;
        }
        const auto p = static_cast<Eigen::Index>(1 + offset_harmonics.size());
        Eigen::MatrixXcd x(n, p);
        for (Eigen::Index i = 0; i < n; ++i) {
            double t = grid[static_cast<size_t>(i)];
            x(i, 0) = std::polar(1.0, c * t);
            for (size_t h = 0; h < offset_harmonics.size(); ++h) {
                x(i, static_cast<Eigen::Index>(h + 1)) = std::polar(1.0, offset_harmonics[h] * t);
            }
        }
        Eigen::VectorXcd coeff = x.colPivHouseholderQr().solve(y);
        fits.push_back({c, (y - x * coeff).squaredNorm(), coeff});
    }
    if (fits.size() < 2) {
        throw Error(ErrorKind::InvalidSpec, "fit needs at least two admissible candidates");
    }
    std::stable_sort(fits.begin(), fits.end(),
                     [](const Candidate &a, const Candidate &b) { return a.residual < b.residual; });
    const Candidate &best = fits[0];
    const Candidate &second = fits[1];
    if (second.residual - best.residual <= 0.01 * second.residual) {
        std::ostringstream msg;
        msg << "ambiguous fit: C=" << best.c << " (residual " << best.residual << ") vs C=" << second.c
            << " (residual " << second.residual << ")";
        throw Error(ErrorKind::AmbiguousFit, msg.str());
    }
    FitResult out;
    out.chern = best.c;
    out.amplitude = best.coeff[0];
    for (Eigen::Index h = 1; h < best.coeff.size(); ++h) {
        out.offset.push_back(best.coeff[h]);
    }
    out.residual = best.residual;
    out.runner_up = second.c;
    out.runner_up_residual = second.residual;
    return out;
}

TwistScan resta_chern(const LatticeGeometry &geometry, const HofstadterSpec &spec, int n_particles, int s,
                      std::span<const double> grid, double tol) {
    if (geometry.boundary == Boundary::Open) {
        throw Error(ErrorKind::GeometryMismatch, "polarization winding needs a cylinder or torus");
    }
    auto basis = enumerate_basis(geometry.n_sites(), n_particles);
    TwistScan scan;
    scan.grid.assign(grid.begin(), grid.end());
    EigenOptions options;
    options.tol = tol;
    for (double theta : grid) {
        HofstadterSpec twisted = spec;
        twisted.twist_x = theta;
        EigenPairs pairs = lowest_eigenpairs(build_hofstadter(geometry, basis, twisted), 2, options);
        double gap = pairs.values.size() > 1 ? relative_gap(pairs.values[0], pairs.values[1])
                                             : std::numeric_limits<double>::infinity();
        if (gap < kDegeneracyThreshold) {
            throw Error(ErrorKind::Degeneracy, "ground state degenerate at twist " + std::to_string(theta));
        }
        scan.gaps.push_back(gap);
        scan.values.push_back(resta_T(geometry, FockState(basis, pairs.vectors[0]), s));
    }
    WindingResult w = winding_number(scan.values);
    scan.chern = w.winding;
    scan.max_jump = w.max_jump;
    return scan;
}

BerryResult berry_from_states(const std::vector<std::vector<CVector>> &states, int steps_x, int steps_y) {
    auto at = [&](int ix, int iy) -> const std::vector<CVector> & {
        return states[static_cast<size_t>(((ix % steps_x) * steps_y) + (iy % steps_y))];
    };
    BerryResult out;
    out.min_link = std::numeric_limits<double>::infinity();
    auto link = [&](const std::vector<CVector> &a, const std::vector<CVector> &b) {
        const auto m = static_cast<Eigen::Index>(a.size());
        Eigen::MatrixXcd overlap(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                overlap(i, j) = a[static_cast<size_t>(i)].dot(b[static_cast<size_t>(j)]);
            }
        }
        cdouble d = overlap.determinant();
        double mod = std::abs(d);
        out.min_link = std::min(out.min_link, mod);
        if (mod < 1e-6) {
            throw Error(ErrorKind::GridTooCoarse, "twist-grid link overlap below 1e-6");
        }
        return d / mod;
    };
    std::vector<cdouble> ux(states.size()), uy(states.size());
    for (int ix = 0; ix < steps_x; ++ix) {
        for (int iy = 0; iy < steps_y; ++iy) {
            auto k = static_cast<size_t>(ix * steps_y + iy);
            ux[k] = link(at(ix, iy), at(ix + 1, iy));
            uy[k] = link(at(ix, iy), at(ix, iy + 1));
        }
    }
    double total = 0;
    for (int ix = 0; ix < steps_x; ++ix) {
        for (int iy = 0; iy < steps_y; ++iy) {
            auto k = static_cast<size_t>(ix * steps_y + iy);
            auto kx = static_cast<size_t>(((ix + 1) % steps_x) * steps_y + iy);
            auto ky = static_cast<size_t>(ix * steps_y + (iy + 1) % steps_y);
            double f = std::arg(ux[k] * uy[kx] * std::conj(ux[ky]) * std::conj(uy[k]));
            total += f;
            out.max_plaquette = std::max(out.max_plaquette, std::abs(f));
        }
    }
    out.raw = total / kTwoPi;
    out.chern = static_cast<int>(std::lround(out.raw));
    return out;
}

BerryResult berry_chern(const LatticeGeometry &geometry, const HofstadterSpec &spec, int n_particles, int s,
                        int steps_x, int steps_y, double tol, int multiplet) {
    if (geometry.boundary != Boundary::Torus) {
        throw Error(ErrorKind::GeometryMismatch, "Berry curvature over both twists needs a torus");
    }
    if (s < 1 || multiplet < 1 || steps_x < 2 || steps_y < 2) {
        throw Error(ErrorKind::InvalidSpec, "berry_chern needs s >= 1, multiplet >= 1 and at least a 2x2 twist grid");
    }
    auto basis = enumerate_basis(geometry.n_sites(), n_particles);
    if (basis->dimension() <= static_cast<size_t>(multiplet)) {
        throw Error(ErrorKind::InvalidSpec, "multiplet fills the whole Hilbert space");
    }
    EigenOptions options;
    options.tol = tol;
    std::vector<std::vector<CVector>> states;
    states.reserve(static_cast<size_t>(steps_x * steps_y));
    double min_gap = std::numeric_limits<double>::infinity();
    for (int ix = 0; ix < steps_x; ++ix) {
        for (int iy = 0; iy < steps_y; ++iy) {
            HofstadterSpec twisted = spec;
            twisted.twist_x = kTwoPi * s * ix / steps_x;
            twisted.twist_y = kTwoPi * iy / steps_y;
            EigenPairs pairs = lowest_eigenpairs(build_hofstadter(geometry, basis, twisted), multiplet + 1, options);
            double gap = relative_gap(pairs.values[static_cast<size_t>(multiplet - 1)],
                                      pairs.values[static_cast<size_t>(multiplet)]);
            if (gap < kDegeneracyThreshold) {
                std::ostringstream msg;
                msg << "multiplet gap closes at twist (" << twisted.twist_x << ", " << twisted.twist_y << ")";
                throw Error(ErrorKind::Degeneracy, msg.str());
            }
            min_gap = std::min(min_gap, gap);
            pairs.vectors.resize(static_cast<size_t>(multiplet));
            states.push_back(std::move(pairs.vectors));
        }
    }
    BerryResult out = berry_from_states(states, steps_x, steps_y);
    out.min_gap = min_gap;
    return out;
}

}  // namespace mbcn
