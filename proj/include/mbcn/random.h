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

#ifndef MBCN_RANDOM_H
#define MBCN_RANDOM_H

#include <cstdint>
#include <initializer_list>
#include <random>

#include "mbcn/basis.h"

namespace mbcn {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Mixes a master seed with a list of stream labels into an independent seed.
inline uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> labels) {
    uint64_t s = splitmix64(master);
    for (uint64_t l : labels) {
        s = splitmix64(s ^ splitmix64(l + 0x632BE59BD9B4E019ULL));
    }
    return s;
}

using Rng = std::mt19937_64;

CVector random_vector(size_t dim, Rng &rng);

/// Haar-distributed unitary (QR of a complex Ginibre matrix with the R-diagonal
/// phases divided out).
CMatrix haar_unitary(int dim, Rng &rng);

}  // namespace mbcn

#endif
