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

#ifndef MBCN_HAMILTONIAN_H
#define MBCN_HAMILTONIAN_H

#include <cstdint>
#include <vector>

#include "mbcn/sparse_operator.h"

namespace mbcn {

/// Hofstadter tunneling model in the Landau gauge: a +y hop at column x carries
/// the phase exp(-i flux (x - landau_origin)). Boundary-crossing x hops carry
/// exp(i (flux n_x y + twist_x)), which keeps every plaquette at flux `flux` on
/// periodic geometries. Boundary-crossing y hops carry an extra exp(i twist_y).
struct HofstadterSpec {
    double hopping = 1.0;
    double flux = 0.0;
    double twist_x = 0.0;
    double twist_y = 0.0;
    int landau_origin = 0;
};

/// A hop term `coefficient * a^dag_to a_from` (its Hermitian conjugate is implied).
struct Bond {
    int from;
    int to;
    cdouble coefficient;
};

std::vector<Bond> hofstadter_bonds(const LatticeGeometry &geometry, const HofstadterSpec &spec);

/// Builds a Hermitian number-conserving operator from bonds plus on-site potentials.
SparseOperator build_hopping_operator(const BasisPtr &basis, const std::vector<Bond> &bonds,
                                      const std::vector<double> &onsite = {});

SparseOperator build_hofstadter(const LatticeGeometry &geometry, const BasisPtr &basis, const HofstadterSpec &spec);

/// Random quench ensemble on a region: hopping inside the region plus Gaussian
/// on-site disorder of standard deviation `disorder`, drawn fresh per step.
struct QuenchSpec {
    Region region;
    double hopping = 1.0;
    double disorder = 1.0;
    double step_time = 1.0;
    int steps = 20;
    uint64_t seed = 0;
};

/// Disorder value for (seed, step, region-local site index). Each value is a pure function of its
/// arguments, so any step can be rebuilt without replaying earlier ones.
double quench_disorder(uint64_t seed, int step, int local_site, double stddev);

/// Nearest-neighbor bonds whose both ends lie inside the region (no wrap-around).
std::vector<std::pair<int, int>> region_bonds(const LatticeGeometry &geometry, const Region &region);

SparseOperator build_quench_step(const LatticeGeometry &geometry, const BasisPtr &basis, const QuenchSpec &spec,
                                 int step);

/// The same step Hamiltonian restricted to the region's own Fock space with
/// `n_local` particles, in the basis enumerate_basis(region.size(), n_local)
/// over region-local site indices.
CMatrix quench_step_sector_matrix(const LatticeGeometry &geometry, const QuenchSpec &spec, int step, int n_local);

}  // namespace mbcn

#endif
