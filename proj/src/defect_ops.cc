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

#include "mbcn/defect_ops.h"

#include <cmath>
#include <numbers>

#include "mbcn/error.h"

namespace mbcn {

void DefectSpec::validate() const {
    if (s < 1) {
        throw Error(ErrorKind::InvalidSpec, "defect period s must be at least 1");
    }
    if (ell_y < 1) {
        throw Error(ErrorKind::InvalidSpec, "defect length ell_y must be at least 1");
    }
}

DefectSpec region_defect(const Region &region, int s) {
    DefectSpec spec;
    spec.s = s;
    spec.region = region;
    spec.ell_y = region.extent_y();
    spec.y_origin = region.origin().y;
    return spec;
}

cdouble v_phase(const LatticeGeometry &geometry, const DefectSpec &spec, Config config) {
    // Sum integer multiples of s first so the angle is formed once.
    long long weight = 0;
    Config occupied = config & spec.region.mask();
    while (occupied) {
        int site = __builtin_ctzll(occupied);
        weight += geometry.coord(site).y - spec.y_origin;
        occupied &= occupied - 1;
    }
    long long numerator = static_cast<long long>(spec.s) * weight;
    long long reduced = ((numerator % spec.ell_y) + spec.ell_y) % spec.ell_y;
    return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(reduced) / spec.ell_y);
}

FockState apply_V(const LatticeGeometry &geometry, const FockState &state, const DefectSpec &spec) {
    spec.validate();
    FockState out = state;
    const auto configs = state.basis->configs();
    for (size_t i = 0; i < configs.size(); ++i) {
        out.amplitudes[static_cast<Eigen::Index>(i)] *= v_phase(geometry, spec, configs[i]);
    }
    return out;
}

FockState apply_W(const FockState &state, const Region &region, double theta) {
    FockState out = state;
    const auto configs = state.basis->configs();
    for (size_t i = 0; i < configs.size(); ++i) {
        out.amplitudes[static_cast<Eigen::Index>(i)] *= std::polar(1.0, theta * particles_in_region(configs[i], region));
    }
    return out;
}

cdouble resta_T(const LatticeGeometry &geometry, const FockState &state, int s) {
    if (geometry.boundary == Boundary::Open) {
        throw Error(ErrorKind::GeometryMismatch, "whole-system polarization needs a cylinder or torus");
    }
    DefectSpec spec;
    spec.s = s;
    spec.region = whole_lattice(geometry);
    spec.ell_y = geometry.n_y;
    spec.y_origin = 0;
    spec.validate();
    cdouble acc = 0;
    const auto configs = state.basis->configs();
    for (size_t i = 0; i < configs.size(); ++i) {
        acc += std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]) * v_phase(geometry, spec, configs[i]);
    }
    return acc;
}

}  // namespace mbcn
