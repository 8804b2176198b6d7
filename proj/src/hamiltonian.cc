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

#include "mbcn/hamiltonian.h"

#include <cmath>
#include <numbers>

#include "mbcn/error.h"
#include "mbcn/random.h"

namespace mbcn {

namespace {

double unit_open(uint64_t bits) {
    // (0, 1), never exactly zero.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

bool is_integer(double v) {
    return std::abs(v - std::round(v)) < 1e-9;
}

}  // namespace

std::vector<Bond> hofstadter_bonds(const LatticeGeometry &g, const HofstadterSpec &spec) {
    if (g.boundary == Boundary::Open && (spec.twist_x != 0.0 || spec.twist_y != 0.0)) {
        throw Error(ErrorKind::InvalidSpec, "twist angles must be zero on an open lattice");
    }
    if (g.boundary == Boundary::CylinderX && spec.twist_y != 0.0) {
        throw Error(ErrorKind::InvalidSpec, "twist_y requires a torus");
    }
    if ((g.periodic_x() && g.n_x < 2) || (g.periodic_y() && g.n_y < 2)) {
        throw Error(ErrorKind::InvalidSpec, "periodic directions need at least two sites");
    }
    if (g.boundary == Boundary::Torus && !is_integer(spec.flux * g.n_x * g.n_y / (2 * std::numbers::pi))) {
        throw Error(ErrorKind::FluxCommensurability, "total torus flux is not an integer number of flux quanta");
    }
    const double J = spec.hopping;
    std::vector<Bond> bonds;
    if (J == 0.0) {
        return bonds;
    }
    auto phase = [](double a) { return std::polar(1.0, a); };
    for (int y = 0; y < g.n_y; ++y) {
        for (int x = 0; x + 1 < g.n_x; ++x) {
            bonds.push_back({g.index(x, y), g.index(x + 1, y), cdouble(-J)});
        }
        if (g.periodic_x()) {
            double a = spec.flux * g.n_x * y + spec.twist_x;
            bonds.push_back({g.index(g.n_x - 1, y), g.index(0, y), -J * phase(a)});
        }
    }
    for (int x = 0; x < g.n_x; ++x) {
        double a = -spec.flux * (x - spec.landau_origin);
        for (int y = 0; y + 1 < g.n_y; ++y) {
            bonds.push_back({g.index(x, y), g.index(x, y + 1), -J * phase(a)});
        }
        if (g.periodic_y()) {
            bonds.push_back({g.index(x, g.n_y - 1), g.index(x, 0), -J * phase(a + spec.twist_y)});
        }
    }
    return bonds;
}

SparseOperator build_hopping_operator(const BasisPtr &basis, const std::vector<Bond> &bonds,
                                      const std::vector<double> &onsite) {
    std::vector<Triplet> triplets;
    const auto configs = basis->configs();
    triplets.reserve(configs.size() * (2 * bonds.size() / 2 + 1));
    for (size_t col = 0; col < configs.size(); ++col) {
        Config c = configs[col];
        double diag = 0;
        for (size_t i = 0; i < onsite.size(); ++i) {
            if ((c >> i) & 1) {
                diag += onsite[i];
            }
        }
        if (diag != 0.0) {
            triplets.push_back({col, col, diag});
        }
        for (const Bond &b : bonds) {
            Config from = Config{1} << b.from;
            Config to = Config{1} << b.to;
            if ((c & from) && !(c & to)) {
                triplets.push_back({basis->rank(c ^ from ^ to), col, b.coefficient});
            } else if ((c & to) && !(c & from)) {
                triplets.push_back({basis->rank(c ^ from ^ to), col, std::conj(b.coefficient)});
            }
        }
    }
    return SparseOperator(basis, std::move(triplets), true);
}

SparseOperator build_hofstadter(const LatticeGeometry &geometry, const BasisPtr &basis, const HofstadterSpec &spec) {
    if (basis->n_sites() != geometry.n_sites()) {
        throw Error(ErrorKind::GeometryMismatch, "basis site count does not match the lattice");
    }
    return build_hopping_operator(basis, hofstadter_bonds(geometry, spec));
}

double quench_disorder(uint64_t seed, int step, int site, double stddev) {
    uint64_t key = splitmix64(seed ^ splitmix64((static_cast<uint64_t>(step) << 32) ^ static_cast<uint32_t>(site)));
    double u1 = unit_open(splitmix64(key));
    double u2 = unit_open(splitmix64(key + 1));
    return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

std::vector<std::pair<int, int>> region_bonds(const LatticeGeometry &g, const Region &region) {
    std::vector<std::pair<int, int>> out;
    for (int site : region.sites()) {
        Coord c = g.coord(site);
        if (c.x + 1 < g.n_x && region.contains(g.index(c.x + 1, c.y))) {
            out.emplace_back(site, g.index(c.x + 1, c.y));
        }
        if (c.y + 1 < g.n_y && region.contains(g.index(c.x, c.y + 1))) {
            out.emplace_back(site, g.index(c.x, c.y + 1));
        }
    }
    return out;
}

SparseOperator build_quench_step(const LatticeGeometry &geometry, const BasisPtr &basis, const QuenchSpec &spec,
                                 int step) {
    std::vector<Bond> bonds;
    if (spec.hopping != 0.0) {
        for (auto [a, b] : region_bonds(geometry, spec.region)) {
            bonds.push_back({a, b, cdouble(-spec.hopping)});
        }
    }
    std::vector<double> onsite(static_cast<size_t>(geometry.n_sites()), 0.0);
    const auto &sites = spec.region.sites();
    for (size_t j = 0; j < sites.size(); ++j) {
        onsite[sites[j]] = quench_disorder(spec.seed, step, static_cast<int>(j), spec.disorder);
    }
    return build_hopping_operator(basis, bonds, onsite);
}

CMatrix quench_step_sector_matrix(const LatticeGeometry &geometry, const QuenchSpec &spec, int step, int n_local) {
    const auto &sites = spec.region.sites();
    auto local_index = [&](int site) {
        for (size_t j = 0; j < sites.size(); ++j) {
            if (sites[j] == site) {
                return static_cast<int>(j);
            }
        }
        return -1;
    };
    std::vector<Bond> bonds;
    if (spec.hopping != 0.0) {
        for (auto [a, b] : region_bonds(geometry, spec.region)) {
            bonds.push_back({local_index(a), local_index(b), cdouble(-spec.hopping)});
        }
    }
    std::vector<double> onsite(sites.size());
    for (size_t j = 0; j < sites.size(); ++j) {
        onsite[j] = quench_disorder(spec.seed, step, static_cast<int>(j), spec.disorder);
    }
    auto local_basis = enumerate_basis(static_cast<int>(sites.size()), n_local);
    return build_hopping_operator(local_basis, bonds, onsite).to_dense();
}

}  // namespace mbcn
