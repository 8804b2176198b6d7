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

#ifndef MBCN_PROTOCOL_H
#define MBCN_PROTOCOL_H

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mbcn/defect_ops.h"
#include "mbcn/evolution.h"

namespace mbcn {

/// Shot count meaning "use the exact outcome distribution".
constexpr int64_t kExactShots = 0;

enum class UnitaryEnsemble { Quench, Haar };

/// How the random unitary reaches the state.
enum class PropagationMode {
    /// Dense sector unitaries on R1 applied to the Schmidt blocks of the state.
    SectorBlocks,
    /// Sparse Krylov propagation of every quench step on the full space.
    Krylov,
};

struct NoiseSpec {
    double p_dep = 0;
    double p_loss = 0;
    double p_read = 0;

    bool needs_full_readout() const {
        return p_loss > 0 || p_read > 0;
    }
    void validate() const;
};

struct ProtocolConfig {
    /// The quench region is R1.
    QuenchSpec quench;
    DefectSpec defect;
    Region r1;
    Region r2;
    int n_unitaries = 1;
    int64_t shots = kExactShots;
    std::vector<double> grid;
    uint64_t seed = 0;
    NoiseSpec noise;
    UnitaryEnsemble ensemble = UnitaryEnsemble::Quench;
    PropagationMode mode = PropagationMode::SectorBlocks;
    int bootstrap = 200;

    bool exact() const {
        return shots == kExactShots;
    }
    void validate() const;
};

/// Bit layout of a measured pattern: bits [0, n1) are R1 sites in region
/// order, bits [n1, n1 + n2) are R2 sites.
struct PatternLayout {
    int n1 = 0;
    int n2 = 0;

    Config r1_part(Config b) const {
        return b & ((Config{1} << n1) - 1);
    }
    int n1_count(Config b) const {
        return popcount(r1_part(b));
    }
    int n2_count(Config b) const {
        return popcount(b >> n1);
    }
    std::string to_bits(Config b) const;
    Config from_bits(const std::string &bits) const;
};

PatternLayout layout_of(const Region &r1, const Region &r2);

Config measured_pattern(Config config, const Region &r1, const Region &r2);

enum class Experiment { A, B };

const char *experiment_name(Experiment e);

struct Outcome {
    Config pattern = 0;
    /// Shot count, or probability in exact mode.
    double weight = 0;

    bool operator==(const Outcome &) const = default;
};

struct ShotRecord {
    int u = 0;
    Experiment experiment = Experiment::A;
    bool exact = false;
    /// Sorted by pattern, zero weights omitted.
    std::vector<Outcome> outcomes;
    int64_t heralded = 0;

    double total() const;
    bool operator==(const ShotRecord &) const = default;
};

struct ExperimentPair {
    ShotRecord a;
    ShotRecord b;
};

/// Sector unitaries of the u-th random unitary, indexed by R1 particle number.
/// When `sectors` is nonempty only those entries are filled; the others stay empty.
std::vector<CMatrix> protocol_unitaries(const LatticeGeometry &geometry, const ProtocolConfig &config, int u,
                                        std::span<const int> sectors = {});

ExperimentPair run_experiment_pair(const LatticeGeometry &geometry, const FockState &state,
                                   const ProtocolConfig &config, int u);

enum class DeltaReading {
    /// delta_{b,b'} compares the R1 parts only.
    R1Pattern,
    /// delta_{b,b'} compares whole R1 u R2 patterns.
    FullPattern,
};

cdouble coefficient_O(const PatternLayout &layout, Config b, Config b_prime, double theta,
                      DeltaReading reading = DeltaReading::R1Pattern);

/// Brute-force double sum of O P^V(b) P(b') for one record pair.
cdouble pair_sum_direct(const PatternLayout &layout, const ShotRecord &a, const ShotRecord &b, double theta,
                        DeltaReading reading = DeltaReading::R1Pattern);

/// Per-unitary estimator written as sum_{k,k'} M[k][k'] e^{i (k - k') theta}
/// with k the R2 particle number.
CMatrix pair_moments(const PatternLayout &layout, const ShotRecord &a, const ShotRecord &b);

struct EstimatorResult {
    std::vector<double> grid;
    std::vector<cdouble> values;
    std::vector<double> standard_error;
    int n_unitaries = 0;
    int64_t shots = 0;
    double acceptance = 1;
    /// Averaged moment matrix.
    CMatrix moments;
};

EstimatorResult estimate_T(const PatternLayout &layout, std::span<const ShotRecord> records,
                           std::span<const double> grid, int bootstrap = 200, uint64_t seed = 0);

/// Ideal, depolarized and uniform marginals used by the samplers.
std::vector<Outcome> uniform_marginal(int n_sites, int n_particles, const Region &r1, const Region &r2);

std::vector<int64_t> sample_multinomial(std::span<const double> probabilities, int64_t n, Rng &rng);

using ProgressFn = std::function<void(const ExperimentPair &)>;

/// Runs unitaries [first, config.n_unitaries) and returns their records in u
/// order. `workers` threads share the unitary range.
std::vector<ShotRecord> run_campaign(const LatticeGeometry &geometry, const FockState &state,
                                     const ProtocolConfig &config, int first = 0, int workers = 1,
                                     const ProgressFn &progress = {});

enum class Extraction {
    /// Winding of arg T over the grid.
    Winding,
    /// Best candidate of the offset fit.
    Fit,
};

/// Integer read off an estimate, or nothing when the amplitude vanishes or the
/// fit is ambiguous.
std::optional<int> extract_chern(const EstimatorResult &result, Extraction extraction);

struct SuccessEstimate {
    int successes = 0;
    int repetitions = 0;
    double probability = 0;
    /// Binomial standard error.
    double standard_error = 0;
};

/// Repeats the whole campaign `repetitions` times with independent master
/// seeds and counts how often the extracted integer equals `expected`.
SuccessEstimate success_probability(const LatticeGeometry &geometry, const FockState &state,
                                    const ProtocolConfig &config, int expected, int repetitions,
                                    Extraction extraction = Extraction::Winding, int workers = 1);

// JSON-lines persistence.
void write_records(const std::string &path, const PatternLayout &layout, std::span<const ShotRecord> records,
                   bool append = false);
std::vector<ShotRecord> read_records(const std::string &path, const PatternLayout &layout);
/// Keeps the longest prefix u = 0, 1, ... with both experiments present.
std::vector<ShotRecord> complete_pairs(std::vector<ShotRecord> records);

}  // namespace mbcn

#endif
