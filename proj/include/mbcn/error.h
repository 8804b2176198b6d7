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

#ifndef MBCN_ERROR_H
#define MBCN_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace mbcn {

enum class ErrorKind {
    InvalidParticleNumber,
    InvalidConfiguration,
    InvalidSpec,
    FluxCommensurability,
    GeometryMismatch,
    RegionOverlap,
    Convergence,
    PropagationAccuracy,
    Degeneracy,
    Capacity,
    VanishingAmplitude,
    AmbiguousFit,
    GridTooCoarse,
    Pairing,
    Io,
};

std::string_view error_kind_name(ErrorKind kind);

/// Process exit code the CLI uses for an error of this kind.
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {
    }
    ErrorKind kind() const {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

}  // namespace mbcn

#endif
