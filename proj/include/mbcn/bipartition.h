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

#ifndef MBCN_BIPARTITION_H
#define MBCN_BIPARTITION_H

#include <vector>

#include "mbcn/basis.h"

namespace mbcn {

/// Packs the bits of `config` selected by `mask` into the low bits, in
/// ascending site order.
Config compress_bits(Config config, Config mask);
/// Inverse of compress_bits.
Config expand_bits(Config packed, Config mask);

/// A fixed-N state reshaped across the cut between a region and its complement.
/// For each region particle number n the block holds psi(r, c) with rows r
/// indexed by the rank of the region-local pattern (enumerate_basis(|R|, n))
/// and one column per complement configuration that occurs.
struct SectorBlock {
    int n_region = 0;
    CMatrix amplitudes;
    /// Complement configurations (full-lattice bits) labelling the columns.
    std::vector<Config> complement;
};

struct Bipartition {
    Region region;
    std::vector<SectorBlock> sectors;
};

Bipartition split_state(const FockState &state, const Region &region);

/// Full-lattice configuration for a region-local pattern.
Config embed_pattern(Config pattern, const Region &region);

}  // namespace mbcn

#endif
