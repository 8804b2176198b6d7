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

#include "mbcn/error.h"

namespace mbcn {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParticleNumber:
            return "invalid-particle-number";
        case ErrorKind::InvalidConfiguration:
            return "invalid-configuration";
        case ErrorKind::InvalidSpec:
            return "invalid-spec";
        case ErrorKind::FluxCommensurability:
            return "flux-commensurability";
        case ErrorKind::GeometryMismatch:
            return "geometry-mismatch";
        case ErrorKind::RegionOverlap:
            return "region-overlap";
        case ErrorKind::Convergence:
            return "convergence";
        case ErrorKind::PropagationAccuracy:
            return "propagation-accuracy";
        case ErrorKind::Degeneracy:
            return "degeneracy";
        case ErrorKind::Capacity:
            return "capacity";
        case ErrorKind::VanishingAmplitude:
            return "vanishing-amplitude";
        case ErrorKind::AmbiguousFit:
            return "ambiguous-fit";
        case ErrorKind::GridTooCoarse:
            return "grid-too-coarse";
        case ErrorKind::Pairing:
            return "pairing";
        case ErrorKind::Io:
            return "io";
    }
    return "unknown";
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Convergence:
        case ErrorKind::PropagationAccuracy:
        case ErrorKind::Degeneracy:
        case ErrorKind::VanishingAmplitude:
        case ErrorKind::AmbiguousFit:
        case ErrorKind::GridTooCoarse:
            return 3;
        case ErrorKind::Capacity:
            return 4;
        default:
            return 2;
    }
}

}  // namespace mbcn
