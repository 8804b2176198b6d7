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

#include "mbcn/protocol.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "json.hpp"
#include "mbcn/bipartition.h"
#include "mbcn/chern.h"
#include "mbcn/error.h"

namespace mbcn {

namespace {

using FullDistribution = std::vector<std::pair<Config, double>>;

void check_probability(double p, const char *name, bool allow_one = false) {
    if (!(p >= 0.0 && (p < 1.0 || (allow_one && p == 1.0)))) {
        throw Error(ErrorKind::InvalidSpec, std::string(name) + (allow_one ? " must lie in [0, 1]" : " must lie in [0, 1)"));
    }
}

std::vector<Outcome> marginalize(const FullDistribution &dist, const Region &r1, const Region &r2) {
    std::map<Config, double> acc;
    for (const auto &[config, p] : dist) {
        if (p != 0.0) {
            acc[measured_pattern(config, r1, r2)] += p;
        }
    }
    std::vector<Outcome> out;
    out.reserve(acc.size());
    for (const auto &[pattern, p] : acc) {
        out.push_back({pattern, p});
    }
    return out;
}

std::vector<Outcome> mix(const std::vector<Outcome> &ideal, const std::vector<Outcome> &uniform, double p) {
    std::map<Config, double> acc;
    for (const auto &o : ideal) {
        acc[o.pattern] += (1.0 - p) * o.weight;
    }
    if (p > 0) {
        for (const auto &o : uniform) {
            acc[o.pattern] += p * o.weight;
        }
    }
    std::vector<Outcome> out;
    for (const auto &[pattern, w] : acc) {
        if (w != 0.0) {
            out.push_back({pattern, w});
        }
    }
    return out;
}

void add_counts(std::map<Config, double> &acc, const std::vector<Outcome> &dist, int64_t n, Rng &rng) {
    if (n == 0 || dist.empty()) {
        return;
    }
    std::vector<double> p(dist.size());
    for (size_t i = 0; i < dist.size(); ++i) {
        p[i] = dist[i].weight;
    }
    std::vector<int64_t> counts = sample_multinomial(p, n, rng);
    for (size_t i = 0; i < dist.size(); ++i) {
        if (counts[i] > 0) {
            acc[dist[i].pattern] += static_cast<double>(counts[i]);
        }
    }
}

// Accepted-pattern distribution after loss and readout errors on every site,
// keeping only outcomes whose total measured number is n.
std::vector<Outcome> herald_exact(const std::vector<Outcome> &truth, int m, int n_sites, int n, const NoiseSpec &noise) {
    const double q_occ = (1 - noise.p_loss) * (1 - noise.p_read) + noise.p_loss * noise.p_read;
    const double q_emp = noise.p_read;
    const int n_out = n_sites - m;
    // Probability that the outside sites read k ones given `occ` of them occupied.
    auto outside = [&](int occ) {
        std::vector<double> poly(static_cast<size_t>(n_out + 1), 0.0);
        poly[0] = 1;
        for (int site = 0; site < n_out; ++site) {
            const double q = site < occ ? q_occ : q_emp;
            for (int k = site + 1; k >= 0; --k) {
                double up = k > 0 ? poly[static_cast<size_t>(k - 1)] * q : 0.0;
                double stay = k <= site ? poly[static_cast<size_t>(k)] * (1 - q) : 0.0;
                if (k <= n_out) {
                    poly[static_cast<size_t>(k)] = up + stay;
                }
            }
        }
        return poly;
    };
    std::map<Config, double> acc;
    for (const Outcome &t : truth) {
        const int occ_out = n - popcount(t.pattern);
        std::vector<double> out_poly = outside(occ_out);
        for (Config p = 0; p < (Config{1} << m); ++p) {
            const int need = n - popcount(p);
            if (need < 0 || need > n_out) {
                continue;
            }
            double w = t.weight * out_poly[static_cast<size_t>(need)];
            for (int i = 0; i < m && w != 0.0; ++i) {
                const double q = ((t.pattern >> i) & 1) ? q_occ : q_emp;
                w *= ((p >> i) & 1) ? q : 1 - q;
            }
            if (w != 0.0) {
                acc[p] += w;
            }
        }
    }
    std::vector<Outcome> out;
    for (const auto &[pattern, w] : acc) {
        out.push_back({pattern, w});
    }
    return out;
}

ShotRecord make_record(const FullDistribution &dist, const FockState &state, const ProtocolConfig &config,
                       const std::vector<Outcome> &uniform, int u, Experiment tag) {
    ShotRecord rec;
    rec.u = u;
    rec.experiment = tag;
    rec.exact = config.exact();
    const double p_dep = config.noise.p_dep;
    const int n_sites = state.basis->n_sites();
    const int n = state.basis->n_particles();
    if (config.exact()) {
        rec.outcomes = mix(marginalize(dist, config.r1, config.r2), uniform, p_dep);
        if (config.noise.needs_full_readout()) {
            rec.outcomes = herald_exact(rec.outcomes, config.r1.size() + config.r2.size(), n_sites, n, config.noise);
        }
        return rec;
    }
    Rng rng(derive_seed(config.seed, {static_cast<uint64_t>(u), 1 + static_cast<uint64_t>(tag)}));
    std::map<Config, double> acc;
    if (!config.noise.needs_full_readout()) {
        int64_t n_dep = 0;
        if (p_dep > 0) {
            n_dep = std::binomial_distribution<int64_t>(config.shots, p_dep)(rng);
        }
        add_counts(acc, marginalize(dist, config.r1, config.r2), config.shots - n_dep, rng);
        add_counts(acc, uniform, n_dep, rng);
    } else {
        std::vector<double> p(dist.size());
        for (size_t i = 0; i < dist.size(); ++i) {
            p[i] = dist[i].second;
        }
        std::discrete_distribution<size_t> ideal(p.begin(), p.end());
        std::uniform_int_distribution<size_t> flat(0, state.basis->dimension() - 1);
        std::bernoulli_distribution depolarized(p_dep), lost(config.noise.p_loss), flipped(config.noise.p_read);
        for (int64_t shot = 0; shot < config.shots; ++shot) {
            Config c = (p_dep > 0 && depolarized(rng)) ? state.basis->unrank(flat(rng)) : dist[ideal(rng)].first;
            if (config.noise.p_loss > 0) {
                for (Config rest = c; rest != 0; rest &= rest - 1) {
                    if (lost(rng)) {
                        c &= ~(rest & (~rest + 1));
                    }
                }
            }
            if (config.noise.p_read > 0) {
                for (int site = 0; site < n_sites; ++site) {
                    if (flipped(rng)) {
                        c ^= Config{1} << site;
                    }
                }
            }
            if (popcount(c) != n) {
                ++rec.heralded;
                continue;
            }
            acc[measured_pattern(c, config.r1, config.r2)] += 1.0;
        }
    }
    for (const auto &[pattern, w] : acc) {
        rec.outcomes.push_back({pattern, w});
    }
    return rec;
}

std::pair<FullDistribution, FullDistribution> sector_distributions(const LatticeGeometry &geometry,
                                                                   const FockState &state,
                                                                   const ProtocolConfig &config, int u) {
    Bipartition bp = split_state(state, config.r1);
    std::vector<int> present;
    for (const SectorBlock &block : bp.sectors) {
        if (block.amplitudes.squaredNorm() > 0) {
            present.push_back(block.n_region);
        }
    }
    std::vector<CMatrix> unitaries = protocol_unitaries(geometry, config, u, present);
    FullDistribution da, db;
    da.reserve(state.dimension());
    db.reserve(state.dimension());
    for (const SectorBlock &block : bp.sectors) {
        if (block.amplitudes.squaredNorm() == 0) {
            continue;
        }
        const CMatrix &un = unitaries[static_cast<size_t>(block.n_region)];
        const auto d = block.amplitudes.rows();
        auto local = enumerate_basis(config.r1.size(), block.n_region);
        Eigen::VectorXcd phase(d);
        std::vector<Config> rows(static_cast<size_t>(d));
        for (Eigen::Index r = 0; r < d; ++r) {
            rows[static_cast<size_t>(r)] = embed_pattern(local->unrank(static_cast<size_t>(r)), config.r1);
            phase[r] = v_phase(geometry, config.defect, rows[static_cast<size_t>(r)]);
        }
        CMatrix ua = un * (phase.asDiagonal() * block.amplitudes);
        CMatrix ub = un * block.amplitudes;
        for (Eigen::Index c = 0; c < ua.cols(); ++c) {
            for (Eigen::Index r = 0; r < d; ++r) {
                Config full = rows[static_cast<size_t>(r)] | block.complement[static_cast<size_t>(c)];
                da.emplace_back(full, std::norm(ua(r, c)));
                db.emplace_back(full, std::norm(ub(r, c)));
            }
        }
    }
    return {std::move(da), std::move(db)};
}

FullDistribution full_distribution(const FockState &state) {
    FullDistribution out(state.dimension());
    const auto configs = state.basis->configs();
    for (size_t i = 0; i < out.size(); ++i) {
        out[i] = {configs[i], std::norm(state.amplitudes[static_cast<Eigen::Index>(i)])};
    }
    return out;
}

}  // namespace

void NoiseSpec::validate() const {
    check_probability(p_dep, "p_dep", true);
    check_probability(p_loss, "p_loss");
    check_probability(p_read, "p_read");
}

void ProtocolConfig::validate() const {
    if (n_unitaries < 1) {
        throw Error(ErrorKind::InvalidSpec, "N_U must be at least 1");
    }
    if (shots < 0) {
        throw Error(ErrorKind::InvalidSpec, "N_M must be positive (or 0 for exact probabilities)");
    }
    if (grid.empty()) {
        throw Error(ErrorKind::InvalidSpec, "theta grid is empty");
    }
    noise.validate();
    if (r1.overlaps(r2)) {
        throw Error(ErrorKind::RegionOverlap, "regions " + r1.describe() + " and " + r2.describe() + " overlap");
    }
    if (quench.region.mask() != r1.mask()) {
        throw Error(ErrorKind::InvalidSpec, "the quench acts on R1");
    }
    defect.validate();
    if ((defect.region.mask() & ~r1.mask()) != 0) {
        throw Error(ErrorKind::InvalidSpec, "the polarization defect must be supported inside R1");
    }
    if (r1.size() > 12) {
        throw Error(ErrorKind::Capacity, "R1 has more than 12 sites");
    }
    if (ensemble == UnitaryEnsemble::Haar && mode == PropagationMode::Krylov) {
        throw Error(ErrorKind::InvalidSpec, "Haar unitaries are only available as sector blocks");
    }
    if (bootstrap < 0) {
        throw Error(ErrorKind::InvalidSpec, "bootstrap count must be nonnegative");
    }
}

std::string PatternLayout::to_bits(Config b) const {
    std::string s(static_cast<size_t>(n1 + n2), '0');
    for (int i = 0; i < n1 + n2; ++i) {
        if ((b >> i) & 1) {
            s[static_cast<size_t>(i)] = '1';
        }
    }
    return s;
}

Config PatternLayout::from_bits(const std::string &bits) const {
    if (bits.size() != static_cast<size_t>(n1 + n2)) {
        throw Error(ErrorKind::Io, "pattern '" + bits + "' has the wrong length");
    }
    Config b = 0;
    for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            b |= Config{1} << i;
        } else if (bits[i] != '0') {
            throw Error(ErrorKind::Io, "pattern '" + bits + "' is not a bitstring");
        }
    }
    return b;
}

PatternLayout layout_of(const Region &r1, const Region &r2) {
    return {r1.size(), r2.size()};
}

Config measured_pattern(Config config, const Region &r1, const Region &r2) {
    return restrict_to(config, r1) | (restrict_to(config, r2) << r1.size());
}

const char *experiment_name(Experiment e) {
    return e == Experiment::A ? "A" : "B";
}

double ShotRecord::total() const {
    double t = 0;
    for (const auto &o : outcomes) {
        t += o.weight;
    }
    return t;
}

std::vector<CMatrix> protocol_unitaries(const LatticeGeometry &geometry, const ProtocolConfig &config, int u,
                                        std::span<const int> sectors) {
    const int n1 = config.r1.size();
    std::vector<CMatrix> out(static_cast<size_t>(n1 + 1));
    const uint64_t seed = derive_seed(config.seed, {static_cast<uint64_t>(u), 0});
    QuenchSpec spec = config.quench;
    spec.seed = seed;
    for (int n = 0; n <= n1; ++n) {
        if (!sectors.empty() && std::find(sectors.begin(), sectors.end(), n) == sectors.end()) {
            continue;
        }
        if (config.ensemble == UnitaryEnsemble::Haar) {
            Rng rng(derive_seed(seed, {static_cast<uint64_t>(n)}));
            out[static_cast<size_t>(n)] = haar_unitary(static_cast<int>(binomial(n1, n)), rng);
        } else {
            out[static_cast<size_t>(n)] = quench_sector_unitary(geometry, spec, n);
        }
    }
    return out;
}

ExperimentPair run_experiment_pair(const LatticeGeometry &geometry, const FockState &state,
                                   const ProtocolConfig &config, int u) {
    config.validate();
    FullDistribution da, db;
    if (config.mode == PropagationMode::SectorBlocks) {
        std::tie(da, db) = sector_distributions(geometry, state, config, u);
    } else {
        QuenchSpec spec = config.quench;
        spec.seed = derive_seed(config.seed, {static_cast<uint64_t>(u), 0});
        da = full_distribution(apply_random_quench_unitary(apply_V(geometry, state, config.defect), geometry, spec));
        db = full_distribution(apply_random_quench_unitary(state, geometry, spec));
    }
    std::vector<Outcome> uniform;
    if (config.noise.p_dep > 0 && (config.exact() || !config.noise.needs_full_readout())) {
        uniform = uniform_marginal(state.basis->n_sites(), state.basis->n_particles(), config.r1, config.r2);
    }
    return {make_record(da, state, config, uniform, u, Experiment::A),
            make_record(db, state, config, uniform, u, Experiment::B)};
}

cdouble coefficient_O(const PatternLayout &layout, Config b, Config b_prime, double theta, DeltaReading reading) {
    const int n1 = layout.n1_count(b);
    if (n1 != layout.n1_count(b_prime)) {
        return 0.0;
    }
    const bool same = reading == DeltaReading::R1Pattern ? layout.r1_part(b) == layout.r1_part(b_prime)
                                                         : b == b_prime;
    // D (-D)^{delta - 1}
    const double d = static_cast<double>(binomial(layout.n1, n1));
    const double magnitude = same ? d : -1.0;
    return magnitude * std::polar(1.0, theta * (layout.n2_count(b) - layout.n2_count(b_prime)));
}

cdouble pair_sum_direct(const PatternLayout &layout, const ShotRecord &a, const ShotRecord &b, double theta,
                        DeltaReading reading) {
    const double ta = a.total(), tb = b.total();
    cdouble acc = 0;
    for (const auto &oa : a.outcomes) {
        for (const auto &ob : b.outcomes) {
            acc += coefficient_O(layout, oa.pattern, ob.pattern, theta, reading) * (oa.weight / ta) *
                   (ob.weight / tb);
        }
    }
    return acc;
}

CMatrix pair_moments(const PatternLayout &layout, const ShotRecord &a, const ShotRecord &b) {
    const int k_max = layout.n2;
    const auto width = static_cast<Eigen::Index>(k_max + 1);
    // R1 pattern -> distribution over the R2 particle number.
    auto group = [&](const ShotRecord &rec) {
        std::map<Config, Eigen::VectorXd> g;
        const double total = rec.total();
        for (const auto &o : rec.outcomes) {
            auto [it, inserted] = g.try_emplace(layout.r1_part(o.pattern), Eigen::VectorXd::Zero(width));
            it->second[layout.n2_count(o.pattern)] += o.weight / total;
        }
        return g;
    };
    auto ga = group(a), gb = group(b);
    std::vector<Eigen::VectorXd> sa(static_cast<size_t>(layout.n1 + 1), Eigen::VectorXd::Zero(width));
    std::vector<Eigen::VectorXd> sb = sa;
    for (const auto &[r, y] : ga) {
        sa[static_cast<size_t>(popcount(r))] += y;
    }
    for (const auto &[r, y] : gb) {
        sb[static_cast<size_t>(popcount(r))] += y;
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(width, width);
    for (const auto &[r, ya] : ga) {
        auto it = gb.find(r);
        if (it != gb.end()) {
            m += (static_cast<double>(binomial(layout.n1, popcount(r))) + 1.0) * ya * it->second.transpose();
        }
    }
    for (int n = 0; n <= layout.n1; ++n) {
        m -= sa[static_cast<size_t>(n)] * sb[static_cast<size_t>(n)].transpose();
    }
    return m.cast<cdouble>();
}

namespace {

cdouble evaluate_moments(const CMatrix &m, double theta) {
    cdouble acc = 0;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        for (Eigen::Index kp = 0; kp < m.cols(); ++kp) {
            acc += m(k, kp) * std::polar(1.0, theta * static_cast<double>(k - kp));
        }
    }
    return acc;
}

}  // namespace

EstimatorResult estimate_T(const PatternLayout &layout, std::span<const ShotRecord> records,
                           std::span<const double> grid, int bootstrap, uint64_t seed) {
    std::map<int, std::pair<const ShotRecord *, const ShotRecord *>> pairs;
    double accepted = 0, heralded = 0;
    int64_t shots = 0;
    for (const ShotRecord &rec : records) {
        auto &slot = pairs[rec.u];
        const ShotRecord *&target = rec.experiment == Experiment::A ? slot.first : slot.second;
        if (target != nullptr) {
            throw Error(ErrorKind::Pairing, "duplicate record for unitary " + std::to_string(rec.u));
        }
        target = &rec;
        if (rec.exact) {
            accepted += rec.total();
            heralded += std::max(0.0, 1.0 - rec.total());
        } else {
            accepted += rec.total();
            heralded += static_cast<double>(rec.heralded);
        }
        if (!rec.exact) {
            shots = std::max(shots, static_cast<int64_t>(std::llround(rec.total())) + rec.heralded);
        }
    }
    std::vector<CMatrix> per_u;
    per_u.reserve(pairs.size());
    for (const auto &[u, slot] : pairs) {
        if (slot.first == nullptr || slot.second == nullptr) {
            throw Error(ErrorKind::Pairing, "unitary " + std::to_string(u) + " lacks one of the two experiments");
        }
        if (slot.first->total() > 0 && slot.second->total() > 0) {
            per_u.push_back(pair_moments(layout, *slot.first, *slot.second));
        }
    }
    if (per_u.empty()) {
        throw Error(ErrorKind::Pairing, "no unitary has accepted shots in both experiments");
    }
    const auto width = static_cast<Eigen::Index>(layout.n2 + 1);
    EstimatorResult res;
    res.grid.assign(grid.begin(), grid.end());
    res.n_unitaries = static_cast<int>(per_u.size());
    res.shots = shots;
    res.acceptance = heralded > 1e-15 ? accepted / (accepted + heralded) : 1.0;
    res.moments = CMatrix::Zero(width, width);
    for (const CMatrix &m : per_u) {
        res.moments += m;
    }
    res.moments /= static_cast<double>(per_u.size());
    for (double theta : grid) {
        res.values.push_back(evaluate_moments(res.moments, theta));
    }
    res.standard_error.assign(grid.size(), 0.0);
    if (bootstrap > 1 && per_u.size() > 1) {
        Rng rng(derive_seed(seed, {0xB0075742ULL}));
        std::uniform_int_distribution<size_t> pick(0, per_u.size() - 1);
        std::vector<std::vector<cdouble>> reps(grid.size());
        for (int rep = 0; rep < bootstrap; ++rep) {
            CMatrix m = CMatrix::Zero(width, width);
            for (size_t i = 0; i < per_u.size(); ++i) {
                m += per_u[pick(rng)];
            }
            m /= static_cast<double>(per_u.size());
            for (size_t g = 0; g < grid.size(); ++g) {
                reps[g].push_back(evaluate_moments(m, grid[g]));
            }
        }
        for (size_t g = 0; g < grid.size(); ++g) {
            cdouble mean = 0;
            for (cdouble v : reps[g]) {
                mean += v;
            }
            mean /= static_cast<double>(bootstrap);
            double ss = 0;
            for (cdouble v : reps[g]) {
                ss += std::norm(v - mean);
            }
            res.standard_error[g] = std::sqrt(ss / static_cast<double>(bootstrap - 1));
        }
    }
    return res;
}

std::vector<Outcome> uniform_marginal(int n_sites, int n_particles, const Region &r1, const Region &r2) {
    const int m = r1.size() + r2.size();
    if (m > 24) {
        throw Error(ErrorKind::Capacity, "R1 u R2 has more than 24 sites");
    }
    const int outside = n_sites - m;
    const double total = static_cast<double>(binomial(n_sites, n_particles));
    std::vector<Outcome> out;
    for (Config p = 0; p < (Config{1} << m); ++p) {
        const int k = popcount(p);
        if (k <= n_particles && n_particles - k <= outside) {
            out.push_back({p, static_cast<double>(binomial(outside, n_particles - k)) / total});
        }
    }
    return out;
}

std::vector<int64_t> sample_multinomial(std::span<const double> probabilities, int64_t n, Rng &rng) {
    std::vector<int64_t> counts(probabilities.size(), 0);
    double mass = 0;
    for (double p : probabilities) {
        mass += p;
    }
    for (size_t i = 0; i < probabilities.size() && n > 0; ++i) {
        if (i + 1 == probabilities.size()) {
            counts[i] = n;
            break;
        }
        double q = mass > 0 ? std::clamp(probabilities[i] / mass, 0.0, 1.0) : 0.0;
        int64_t k = q >= 1.0 ? n : std::binomial_distribution<int64_t>(n, q)(rng);
        counts[i] = k;
        n -= k;
        mass -= probabilities[i];
    }
    return counts;
}

std::vector<ShotRecord> run_campaign(const LatticeGeometry &geometry, const FockState &state,
                                     const ProtocolConfig &config, int first, int workers,
                                     const ProgressFn &progress) {
    config.validate();
    workers = std::max(1, workers);
    std::vector<ShotRecord> out;
    const int block = workers * 8;
    for (int start = first; start < config.n_unitaries; start += block) {
        const int stop = std::min(config.n_unitaries, start + block);
        std::vector<std::optional<ExperimentPair>> results(static_cast<size_t>(stop - start));
        std::atomic<int> next{start};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&]() {
            for (int u = next++; u < stop; u = next++) {
                try {
                    results[static_cast<size_t>(u - start)] = run_experiment_pair(geometry, state, config, u);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        };
        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back(work);
            }
            for (auto &t : pool) {
                t.join();
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
        for (auto &r : results) {
            if (progress) {
                progress(*r);
            }
            out.push_back(std::move(r->a));
            out.push_back(std::move(r->b));
        }
    }
    return out;
}

std::optional<int> extract_chern(const EstimatorResult &result, Extraction extraction) {
    try {
        if (extraction == Extraction::Winding) {
            return winding_number(result.values).winding;
        }
        return fit_depolarized(result.values, result.grid).chern;
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::VanishingAmplitude || e.kind() == ErrorKind::AmbiguousFit) {
            return std::nullopt;
        }
        throw;
    }
}

SuccessEstimate success_probability(const LatticeGeometry &geometry, const FockState &state,
                                    const ProtocolConfig &config, int expected, int repetitions,
                                    Extraction extraction, int workers) {
    SuccessEstimate out;
    out.repetitions = repetitions;
    const PatternLayout layout = layout_of(config.r1, config.r2);
    for (int rep = 0; rep < repetitions; ++rep) {
        ProtocolConfig c = config;
        c.seed = derive_seed(config.seed, {0x5EC0FFEEULL, static_cast<uint64_t>(rep)});
        std::vector<ShotRecord> records = run_campaign(geometry, state, c, 0, workers);
        EstimatorResult res = estimate_T(layout, records, c.grid, 0, c.seed);
        if (extract_chern(res, extraction) == expected) {
            ++out.successes;
        }
    }
    if (repetitions > 0) {
        const double p = static_cast<double>(out.successes) / repetitions;
        out.probability = p;
        out.standard_error = std::sqrt(p * (1 - p) / repetitions);
    }
    return out;
}

void write_records(const std::string &path, const PatternLayout &layout, std::span<const ShotRecord> records,
                   bool append) {
    std::ofstream f(path, append ? std::ios::app : std::ios::trunc);
    if (!f) {
        throw Error(ErrorKind::Io, "cannot write " + path);
    }
    for (const ShotRecord &rec : records) {
        nlohmann::json head = {{"u", rec.u},
                               {"experiment", experiment_name(rec.experiment)},
                               {"mode", rec.exact ? "probability" : "count"},
                               {"heralded", rec.heralded},
                               {"outcomes", rec.outcomes.size()}};
        f << head.dump() << '\n';
        for (const Outcome &o : rec.outcomes) {
            nlohmann::json line = {{"u", rec.u},
                                   {"experiment", experiment_name(rec.experiment)},
                                   {"pattern", layout.to_bits(o.pattern)}};
            if (rec.exact) {
                line["probability"] = o.weight;
            } else {
                line["count"] = static_cast<int64_t>(std::llround(o.weight));
            }
            f << line.dump() << '\n';
        }
    }
    f.flush();
    if (!f) {
        throw Error(ErrorKind::Io, "write to " + path + " failed");
    }
}

std::vector<ShotRecord> read_records(const std::string &path, const PatternLayout &layout) {
    std::ifstream f(path);
    if (!f) {
        throw Error(ErrorKind::Io, "cannot read " + path);
    }
    std::vector<ShotRecord> out;
    std::string text;
    std::optional<ShotRecord> current;
    size_t expected = 0;
    while (std::getline(f, text)) {
        if (text.empty()) {
            continue;
        }
        nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded()) {
            break;  // torn tail from an interrupted run
        }
        try {
            if (j.contains("mode")) {
                if (current && current->outcomes.size() == expected) {
                    out.push_back(std::move(*current));
                }
                current.emplace();
                current->u = j.at("u").get<int>();
                current->experiment = j.at("experiment").get<std::string>() == "A" ? Experiment::A : Experiment::B;
                current->exact = j.at("mode").get<std::string>() == "probability";
                current->heralded = j.at("heralded").get<int64_t>();
                expected = j.at("outcomes").get<size_t>();
            } else {
                if (!current) {
                    throw Error(ErrorKind::Io, "outcome line before any record header in " + path);
                }
                Outcome o;
                o.pattern = layout.from_bits(j.at("pattern").get<std::string>());
                o.weight = current->exact ? j.at("probability").get<double>()
                                          : static_cast<double>(j.at("count").get<int64_t>());
                current->outcomes.push_back(o);
            }
        } catch (const nlohmann::json::exception &e) {
            throw Error(ErrorKind::Io, "malformed record line in " + path + ": " + e.what());
        }
    }
    if (current && current->outcomes.size() == expected) {
        out.push_back(std::move(*current));
    }
    return out;
}

std::vector<ShotRecord> complete_pairs(std::vector<ShotRecord> records) {
    std::vector<ShotRecord> out;
    for (size_t i = 0; i + 1 < records.size(); i += 2) {
        const int u = static_cast<int>(i / 2);
        if (records[i].u != u || records[i + 1].u != u || records[i].experiment != Experiment::A ||
            records[i + 1].experiment != Experiment::B) {
            break;
        }
        out.push_back(std::move(records[i]));
        out.push_back(std::move(records[i + 1]));
    }
    return out;
}

}  // namespace mbcn
