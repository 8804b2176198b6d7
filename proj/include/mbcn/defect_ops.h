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

#ifndef MBCN_DEFECT_OPS_H
#define MBCN_DEFECT_OPS_H

#include "mbcn/basis.h"

namespace mbcn {

/// Polarization-type defect on a region: each boson at row y picks up
/// exp(2 pi i s (y - y_origin) / ell_y).
struct DefectSpec {
    int s = 1;
    Region region;
    int ell_y = 1;
    int y_origin = 0;

    void validate() const;
};

/// Defect with ell_y equal to the region height and y measured from the region's bottom row.
DefectSpec region_defect(const Region &region, int s);

/// Phase picked up by one configuration under V.
cdouble v_phase(const LatticeGeometry &geometry, const DefectSpec &spec, Config config);

FockState apply_V(const LatticeGeometry &geometry, const FockState &state, const DefectSpec &spec);

/// W_R(theta) = exp(i theta N_R).
FockState apply_W(const FockState &state, const Region &region, double theta);

/// <psi| prod_{x,y} exp(2 pi i s y n(x,y) / n_y) |psi> over the whole lattice.
/// Only defined on cylinder and torus geometries.
cdouble resta_T(const LatticeGeometry &geometry, const FockState &state, int s);

}  // namespace mbcn

#endif
