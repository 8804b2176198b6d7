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

#include "mbcn/bipartition.h"

#include <algorithm>

#include "mbcn/error.h"

namespace mbcn {

Config compress_bits(Config config, Config mask) {
    Config out = 0;
    int j = 0;
    while (mask) {
        int site = __builtin_ctzll(mask);
        out |= ((config >> site) & 1) << j;
        ++j;
        mask &= mask - 1;
    }
    return out;
}

Config expand_bits(Config packed, Config mask) {
    Config out = 0;
    int j = 0;
    while (mask) {
        int site = __builtin_ctzll(mask);
        out |= ((packed >> j) & 1) << site;
        ++j;
        mask &= mask - 1;
    }
    return out;
}

Config embed_pattern(Config pattern, const Region &region) {
    Config out = 0;
    const auto &sites = region.sites();
    for (size_t j = 0; j < sites.size(); ++j) {
        out |= ((pattern >> j) & 1) << sites[j];
    }
    return out;
}

Bipartition split_state(const FockState &state, const Region &region) {
    const int region_size = region.size();
    const int n_total = state.basis->n_particles();
    const Config outside = (state.basis->n_sites() == 64 ? ~Config{0} : (Config{1} << state.basis->n_sites()) - 1) &
                           ~region.mask();
    const int outside_size = popcount(outside);

    Bipartition bp;
    bp.region = region;
    const int n_min = std::max(0, n_total - outside_size);
    const int n_max = std::min(region_size, n_total);
    for (int n = n_min; n <= n_max; ++n) {
        SectorBlock block;
        block.n_region = n;
        const auto rows = static_cast<Eigen::Index>(binomial(region_size, n));
        const auto cols = static_cast<Eigen::Index>(binomial(outside_size, n_total - n));
        if (static_cast<double>(rows) * static_cast<double>(cols) > 4e8) {
            throw Error(ErrorKind::Capacity, "bipartition block too large");
        }
        block.amplitudes = CMatrix::Zero(rows, cols);
        block.complement.resize(static_cast<size_t>(cols));
        bp.sectors.push_back(std::move(block));
    }
    const auto configs = state.basis->configs();
    for (size_t i = 0; i < configs.size(); ++i) {
        Config c = configs[i];
        Config pattern = restrict_to(c, region);
        Config rest = c & outside;
        SectorBlock &block = bp.sectors[static_cast<size_t>(popcount(pattern) - n_min)];
        auto row = static_cast<Eigen::Index>(combinatorial_rank(pattern));
        auto col = static_cast<size_t>(combinatorial_rank(compress_bits(rest, outside)));
        block.amplitudes(row, static_cast<Eigen::Index>(col)) = state.amplitudes[static_cast<Eigen::Index>(i)];
        block.complement[col] = rest;
    }
    return bp;
}

}  // namespace mbcn
