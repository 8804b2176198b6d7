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


#include "mbcn/benchmark.h"

#include <cmath>
#include <numbers>

#include "mbcn/error.h"

namespace mbcn {

PumpBenchmark polarization_pump(int height, int r2_rows) {
    if (height < 3 || r2_rows < 1 || r2_rows > height) {
        throw Error(ErrorKind::InvalidSpec, "pump benchmark needs height >= 3 and 1 <= r2_rows <= height");
    }
    PumpBenchmark b;
    b.geometry = LatticeGeometry(3, height, Boundary::Open);
    b.r1 = Region(b.geometry, {0, 0}, 1, height);
    b.r2 = Region(b.geometry, {1, 0}, 1, r2_rows);
    b.defect = region_defect(b.r1, 1);
    auto basis = enumerate_basis(b.geometry.n_sites(), 2);
    CVector amp = CVector::Zero(static_cast<Eigen::Index>(basis->dimension()));
    const double ax = 1.0 / std::sqrt(static_cast<double>(height));
    const double a2 = 1.0 / std::sqrt(static_cast<double>(r2_rows));
    const double ares = 1.0 / std::sqrt(static_cast<double>(height));
    const double half = 1.0 / std::sqrt(2.0);
    for (int y = 0; y < height; ++y) {
        const Config left = Config{1} << b.geometry.index(0, y);
        const cdouble d = std::polar(1.0, 2 * std::numbers::pi * y / height);
        for (int y2 = 0; y2 < r2_rows; ++y2) {
            Config c = left | (Config{1} << b.geometry.index(1, y2));
            amp[static_cast<Eigen::Index>(basis->rank(c))] += half * ax * a2;
        }
        for (int y3 = 0; y3 < height; ++y3) {
            Config c = left | (Config{1} << b.geometry.index(2, y3));
            amp[static_cast<Eigen::Index>(basis->rank(c))] += half * d * ax * ares;
        }
    }
    b.state = FockState(basis, amp);
    return b;
}

std::pair<Region, Region> centered_regions(const LatticeGeometry &geometry, int ell1, int ell2, int ell_y) {
    if (ell1 < 1 || ell2 < 1 || ell_y < 1 || ell1 + ell2 > geometry.n_x || ell_y > geometry.n_y) {
        throw Error(ErrorKind::InvalidSpec, "regions do not fit on the lattice");
    }
    const int x0 = (geometry.n_x - ell1 - ell2) / 2;
    const int y0 = (geometry.n_y - ell_y) / 2;
    return {Region(geometry, {x0, y0}, ell1, ell_y), Region(geometry, {x0 + ell1, y0}, ell2, ell_y)};
}

}  // namespace mbcn
