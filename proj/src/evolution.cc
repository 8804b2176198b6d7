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

#include "mbcn/evolution.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "mbcn/error.h"

namespace mbcn {

namespace {

struct LanczosRun {
    std::vector<double> values;
    std::vector<CVector> vectors;
    double residual = 0;
    int matvecs = 0;
    bool converged = false;
};

void project_out(CVector &w, const std::vector<CVector> &vs) {
    for (const CVector &v : vs) {
        w -= v * v.dot(w);
    }
}

CVector fresh_direction(size_t dim, Rng &rng, const std::vector<CVector> &locked, const std::vector<CVector> &basis,
                        size_t basis_size) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        CVector w = random_vector(dim, rng);
        for (int pass = 0; pass < 2; ++pass) {
            project_out(w, locked);
            for (size_t i = 0; i < basis_size; ++i) {
                w -= basis[i] * basis[i].dot(w);
            }
        }
        double n = w.norm();
        if (n > 1e-8) {
            return w / n;
        }
    }
    throw Error(ErrorKind::Convergence, "could not find a direction outside the Krylov subspace");
}

// Thick-restart Lanczos on the complement of `locked`. The projected matrix is
// accumulated from explicit inner products, so after a restart it is
// diag(ritz values) bordered by the couplings to the carried residual vector.
LanczosRun thick_restart_lanczos(const SparseOperator &op, int count, const std::vector<CVector> &locked,
                                 const EigenOptions &opt, Rng &rng, int matvec_budget) {
    const size_t dim = op.dimension();
    const size_t avail = dim - locked.size();
    LanczosRun out;
    count = static_cast<int>(std::min<size_t>(static_cast<size_t>(count), avail));
    if (count <= 0) {
        out.converged = true;
        return out;
    }
    const size_t m_max = std::min<size_t>(avail, std::max<size_t>(static_cast<size_t>(opt.subspace), 2 * count + 10));

    std::vector<CVector> basis;
    basis.reserve(m_max + 1);
    basis.push_back(fresh_direction(dim, rng, locked, basis, 0));
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m_max), static_cast<Eigen::Index>(m_max));
    size_t k = 0;
    double beta = 0;
    CVector w;
    std::vector<cdouble> h(m_max);

    while (true) {
        while (k < m_max) {
            op.apply(basis[k], w);
            ++out.matvecs;
            std::fill(h.begin(), h.end(), cdouble(0));
            for (int pass = 0; pass < 2; ++pass) {
                project_out(w, locked);
                for (size_t i = 0; i <= k; ++i) {
                    cdouble c = basis[i].dot(w);
                    h[i] += c;
                    w -= basis[i] * c;
                }
            }
            const auto kk = static_cast<Eigen::Index>(k);
            for (size_t i = 0; i < k; ++i) {
                const auto ii = static_cast<Eigen::Index>(i);
                proj(ii, kk) = h[i];
                proj(kk, ii) = std::conj(h[i]);
            }
            proj(kk, kk) = h[k].real();
            beta = w.norm();
            ++k;
            if (k == avail) {
                beta = 0;
                break;
            }
            double scale = std::max(1.0, proj.topLeftCorner(kk + 1, kk + 1).cwiseAbs().maxCoeff());
            basis.resize(k);
            if (beta <= 1e-12 * scale) {
                beta = 0;
                basis.push_back(fresh_direction(dim, rng, locked, basis, k));
            } else {
                basis.push_back(w / beta);
            }
        }

        const auto kk = static_cast<Eigen::Index>(k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(proj.topLeftCorner(kk, kk));
        const Eigen::VectorXd &theta = eig.eigenvalues();
        const Eigen::MatrixXcd &y = eig.eigenvectors();
        double worst = 0;
        for (int j = 0; j < count; ++j) {
            worst = std::max(worst, beta * std::abs(y(kk - 1, j)));
        }
        out.residual = worst;
        bool done = worst <= opt.tol || k == avail;
        if (done || out.matvecs >= matvec_budget) {
            out.converged = done;
            for (int j = 0; j < count; ++j) {
                CVector x = CVector::Zero(static_cast<Eigen::Index>(dim));
                for (size_t i = 0; i < k; ++i) {
                    x += basis[i] * y(static_cast<Eigen::Index>(i), j);
                }
                x.normalize();
                out.values.push_back(theta[j]);
                out.vectors.push_back(std::move(x));
            }
            return out;
        }

        const size_t keep = std::min(k - 1, static_cast<size_t>(count) + (m_max - static_cast<size_t>(count)) / 2);
        std::vector<CVector> next;
        next.reserve(m_max + 1);
        for (size_t j = 0; j < keep; ++j) {
            CVector x = CVector::Zero(static_cast<Eigen::Index>(dim));
            for (size_t i = 0; i < k; ++i) {
                x += basis[i] * y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
            next.push_back(std::move(x));
        }
        next.push_back(std::move(basis[k]));
        basis = std::move(next);
        proj.setZero();
        for (size_t j = 0; j < keep; ++j) {
            proj(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = theta[static_cast<Eigen::Index>(j)];
        }
        k = keep;
    }
}

}  // namespace

EigenPairs lowest_eigenpairs(const SparseOperator &op, int count, const EigenOptions &options) {
    const size_t dim = op.dimension();
    if (dim == 0) {
        throw Error(ErrorKind::InvalidSpec, "operator has an empty basis");
    }
    Rng rng(options.seed);
    count = static_cast<int>(std::min<size_t>(static_cast<size_t>(std::max(count, 1)), dim));

    LanczosRun run = thick_restart_lanczos(op, count, {}, options, rng, options.max_matvecs);
    EigenPairs result;
    result.matvecs = run.matvecs;
    if (!run.converged) {
        throw Error(ErrorKind::Convergence,
                    "eigensolver did not converge; best residual " + std::to_string(run.residual));
    }
    result.values = std::move(run.values);
    result.vectors = std::move(run.vectors);
    result.residual = run.residual;

    if (options.deflation_check) {
        // A single Krylov sequence sees only one vector per exactly degenerate
        // eigenspace; look for missed partners in the deflated complement.
        for (int round = 0; round < count && dim > result.vectors.size(); ++round) {
            LanczosRun extra = thick_restart_lanczos(op, 1, result.vectors, options, rng,
                                                     options.max_matvecs - result.matvecs);
            result.matvecs += extra.matvecs;
            if (!extra.converged) {
                throw Error(ErrorKind::Convergence,
                            "deflated eigensolve did not converge; best residual " + std::to_string(extra.residual));
            }
            if (extra.values.empty() || extra.values[0] >= result.values.back() - 10 * options.tol) {
                break;
            }
            result.values.back() = extra.values[0];
            result.vectors.back() = std::move(extra.vectors[0]);
            result.residual = std::max(result.residual, extra.residual);
            for (size_t i = result.values.size() - 1; i > 0 && result.values[i] < result.values[i - 1]; --i) {
                std::swap(result.values[i], result.values[i - 1]);
                std::swap(result.vectors[i], result.vectors[i - 1]);
            }
        }
    }
    return result;
}

GroundState ground_state(const SparseOperator &op, double tol, int max_matvecs) {
    EigenOptions options;
    options.tol = tol;
    options.max_matvecs = max_matvecs;
    EigenPairs pairs = lowest_eigenpairs(op, 2, options);
    GroundState gs;
    gs.energy = pairs.values[0];
    gs.state = FockState(op.basis(), pairs.vectors[0]);
    gs.residual = pairs.residual;
    gs.gap = pairs.values.size() > 1 ? pairs.values[1] - pairs.values[0] : std::numeric_limits<double>::infinity();
    gs.degeneracy_warning = gs.gap < 10 * tol;
    return gs;
}

FockState propagate(const SparseOperator &op, const FockState &state, double duration, double tol, int max_subspace) {
    if (duration == 0.0) {
        return state;
    }
    const auto dim = static_cast<Eigen::Index>(state.dimension());
    CVector v = state.amplitudes;
    double remaining = duration;
    double tau = duration;
    int halvings = 0;
    std::vector<CVector> q;
    std::vector<double> alpha, beta;
    CVector w;

    while (std::abs(remaining) > 0) {
        if (std::abs(tau) > std::abs(remaining)) {
            tau = remaining;
        }
        const double norm0 = v.norm();
        if (norm0 == 0.0) {
            break;
        }
        q.assign(1, v / norm0);
        alpha.clear();
        beta.clear();
        bool accepted = false;
        Eigen::VectorXcd coeff;
        for (int j = 0; j < max_subspace; ++j) {
            op.apply(q[static_cast<size_t>(j)], w);
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= j; ++i) {
                    cdouble c = q[static_cast<size_t>(i)].dot(w);
                    if (pass == 0 && i == j) {
                        alpha.push_back(c.real());
                    } else if (i == j) {
                        alpha.back() += c.real();
                    }
                    w -= q[static_cast<size_t>(i)] * c;
                }
            }
            const double b = w.norm();
            const int m = j + 1;
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                t(i, i) = alpha[static_cast<size_t>(i)];
                if (i + 1 < m) {
                    t(i, i + 1) = t(i + 1, i) = beta[static_cast<size_t>(i)];
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
            Eigen::VectorXcd phases(m);
            for (int i = 0; i < m; ++i) {
                phases[i] = std::polar(1.0, -tau * eig.eigenvalues()[i]);
            }
            const Eigen::MatrixXd &z = eig.eigenvectors();
            coeff = z.cast<cdouble>() * phases.cwiseProduct(z.row(0).transpose().cast<cdouble>());
            const bool invariant = b <= 1e-13 * std::max(1.0, t.cwiseAbs().maxCoeff());
            const double err = norm0 * b * std::abs(coeff[m - 1]);
            if (invariant || err <= tol || m == dim) {
                accepted = true;
                break;
            }
            beta.push_back(b);
            q.push_back(w / b);
        }
        if (!accepted) {
            if (++halvings > 40) {
                throw Error(ErrorKind::PropagationAccuracy, "Krylov propagation could not reach the tolerance");
            }
            tau /= 2;
            continue;
        }
        CVector next = CVector::Zero(dim);
        for (Eigen::Index i = 0; i < coeff.size(); ++i) {
            next += q[static_cast<size_t>(i)] * coeff[i];
        }
        v = norm0 * next;
        remaining -= tau;
    }
    return FockState(state.basis, std::move(v));
}

FockState apply_random_quench_unitary(const FockState &state, const LatticeGeometry &geometry, const QuenchSpec &spec,
                                      double tol) {
    FockState out = state;
    for (int k = 0; k < spec.steps; ++k) {
        SparseOperator h = build_quench_step(geometry, state.basis, spec, k);
        out = propagate(h, out, spec.step_time, tol);
    }
    return out;
}

CMatrix hermitian_exp(const CMatrix &h, double time) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    Eigen::VectorXcd phases(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        phases[i] = std::polar(1.0, -time * eig.eigenvalues()[i]);
    }
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

CMatrix quench_sector_unitary(const LatticeGeometry &geometry, const QuenchSpec &spec, int n_local) {
    const auto d = static_cast<Eigen::Index>(binomial(spec.region.size(), n_local));
    CMatrix u = CMatrix::Identity(d, d);
    for (int k = 0; k < spec.steps; ++k) {
        u = hermitian_exp(quench_step_sector_matrix(geometry, spec, k, n_local), spec.step_time) * u;
    }
    return u;
}

FramePotential frame_potential_check(const LatticeGeometry &geometry, const QuenchSpec &spec, int n_local,
                                     int n_samples, EnsembleKind kind) {
    if (spec.region.size() > 12) {
        throw Error(ErrorKind::Capacity, "frame potential needs a region of at most 12 sites");
    }
    if (n_local < 0 || n_local > spec.region.size()) {
        throw Error(ErrorKind::InvalidParticleNumber, "sector particle number outside the region");
    }
    if (n_samples < 2) {
        throw Error(ErrorKind::InvalidSpec, "frame potential needs at least two samples");
    }
    const int d = static_cast<int>(binomial(spec.region.size(), n_local));
    std::vector<CMatrix> samples;
    samples.reserve(static_cast<size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        uint64_t seed = derive_seed(spec.seed, {static_cast<uint64_t>(i)});
        if (kind == EnsembleKind::Haar) {
            Rng rng(seed);
            samples.push_back(haar_unitary(d, rng));
        } else {
            QuenchSpec s = spec;
            s.seed = seed;
            samples.push_back(quench_sector_unitary(geometry, s, n_local));
        }
    }
    const auto n = static_cast<size_t>(n_samples);
    std::vector<double> row(n, 0.0);
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            double x = std::pow(std::norm(samples[i].cwiseProduct(samples[j].conjugate()).sum()), 2);
            row[i] += x;
            row[j] += x;
            total += x;
        }
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    FramePotential fp;
    fp.estimate = total / pairs;
    fp.sector_dimension = d;
    if (n > 2) {
        double sum_sq = 0;
        const double loo_pairs = pairs - static_cast<double>(n - 1);
        for (size_t k = 0; k < n; ++k) {
            double loo = (total - row[k]) / loo_pairs;
            sum_sq += (loo - fp.estimate) * (loo - fp.estimate);
        }
        fp.standard_error = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * sum_sq);
    }
    return fp;
}

}  // namespace mbcn
