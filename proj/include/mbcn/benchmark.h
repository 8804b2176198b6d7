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


#ifndef MBCN_BENCHMARK_H
#define MBCN_BENCHMARK_H

#include "mbcn/defect_ops.h"
#include "mbcn/hamiltonian.h"

namespace mbcn {

/// Small synthetic state with a known correlator winding.
///
/// Lattice 3 x height, two bosons. R1 is column 0, R2 the lowest `r2_rows`
/// sites of column 1, and column 2 is a reservoir. With |x> the uniform
/// superposition over R1 and D = exp(2 pi i y / height),
///
///     |psi> = (|x> |R2 uniform> + |D x> |reservoir uniform>) / sqrt(2),
///
/// so the dressed correlator is exactly exp(i theta) / 4 for height >= 3.
struct PumpBenchmark {
    LatticeGeometry geometry;
    FockState state;
    Region r1;
    Region r2;
    DefectSpec defect;
};

PumpBenchmark polarization_pump(int height, int r2_rows);

/// Default R1 / R2 placement: two blocks adjacent along x, jointly centered.
std::pair<Region, Region> centered_regions(const LatticeGeometry &geometry, int ell1, int ell2, int ell_y);

}  // namespace mbcn

#endif
