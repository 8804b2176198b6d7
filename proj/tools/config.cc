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


#include "config.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "mbcn/benchmark.h"
#include "mbcn/chern.h"
#include "mbcn/error.h"
#include "mbcn/evolution.h"

namespace mbcn::cli {

namespace {

[[noreturn]] void invalid(const std::string &msg) {
    throw Error(ErrorKind::InvalidSpec, msg);
}

void check_keys(const YAML::Node &node, const std::string &where, std::set<std::string> allowed) {
    if (!node.IsMap()) {
        invalid(where + " must be a mapping");
    }
    for (const auto &kv : node) {
        auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            invalid("unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read(const YAML::Node &node, const char *key, T &out) {
    if (node && node[key]) {
        out = node[key].as<T>();
    }
}

template <typename T>
void read(const YAML::Node &node, const char *key, std::optional<T> &out) {
    if (node && node[key]) {
        out = node[key].as<T>();
    }
}

std::optional<Coord> read_coord(const YAML::Node &node, const char *key) {
    if (!node || !node[key]) {
        return std::nullopt;
    }
    auto v = node[key].as<std::vector<int>>();
    if (v.size() != 2) {
        invalid(std::string(key) + " must be [x, y]");
    }
    return Coord{v[0], v[1]};
}

void parse(const YAML::Node &root, Settings &s) {
    check_keys(root, "document",
               {"lattice", "particles", "hamiltonian", "state", "regions", "defect", "quench", "protocol", "noise",
                "seed", "workers", "tolerance", "berry", "success", "sweep", "fit"});
    if (auto n = root["lattice"]) {
        check_keys(n, "lattice", {"nx", "ny", "boundary"});
        read(n, "nx", s.n_x);
        read(n, "ny", s.n_y);
        if (n["boundary"]) {
            s.boundary = parse_boundary(n["boundary"].as<std::string>());
        }
    }
    read(root, "particles", s.particles);
    if (auto n = root["hamiltonian"]) {
        check_keys(n, "hamiltonian", {"hopping", "flux", "flux_fraction", "twist_x", "twist_y", "landau_origin"});
        read(n, "hopping", s.hamiltonian.hopping);
        read(n, "flux", s.hamiltonian.flux);
        if (n["flux_fraction"]) {
            auto f = n["flux_fraction"].as<std::vector<int>>();
            if (f.size() != 2 || f[1] == 0) {
                invalid("flux_fraction must be [p, q] with q != 0");
            }
            s.hamiltonian.flux = 2 * std::numbers::pi * f[0] / f[1];
        }
        read(n, "twist_x", s.hamiltonian.twist_x);
        read(n, "twist_y", s.hamiltonian.twist_y);
        read(n, "landau_origin", s.hamiltonian.landau_origin);
    }
    if (auto n = root["state"]) {
        check_keys(n, "state", {"kind", "height", "r2_rows", "path"});
        read(n, "kind", s.state_kind);
        read(n, "height", s.pump_height);
        read(n, "r2_rows", s.pump_r2_rows);
        read(n, "path", s.checkpoint);
        if (s.state_kind != "hofstadter" && s.state_kind != "pump" && s.state_kind != "checkpoint") {
            invalid("state.kind must be hofstadter, pump or checkpoint");
        }
    }
    if (auto n = root["regions"]) {
        check_keys(n, "regions", {"ell1", "ell2", "ell_y", "r1_origin", "r2_origin"});
        read(n, "ell1", s.ell1);
        read(n, "ell2", s.ell2);
        read(n, "ell_y", s.ell_y);
        s.r1_origin = read_coord(n, "r1_origin");
        s.r2_origin = read_coord(n, "r2_origin");
    }
    if (auto n = root["defect"]) {
        check_keys(n, "defect", {"s", "ell_y", "y_origin"});
        read(n, "s", s.s);
        read(n, "ell_y", s.defect_ell_y);
        read(n, "y_origin", s.defect_y_origin);
    }
    if (auto n = root["quench"]) {
        check_keys(n, "quench", {"hopping", "disorder", "step_time", "steps"});
        read(n, "hopping", s.quench_hopping);
        read(n, "disorder", s.quench_disorder);
        read(n, "step_time", s.quench_step_time);
        read(n, "steps", s.quench_steps);
    }
    if (auto n = root["protocol"]) {
        check_keys(n, "protocol", {"n_unitaries", "shots", "ensemble", "grid_points", "bootstrap"});
        read(n, "n_unitaries", s.n_unitaries);
        if (n["shots"]) {
            if (n["shots"].as<std::string>() == "exact") {
                s.shots = kExactShots;
            } else {
                s.shots = n["shots"].as<int64_t>();
            }
        }
        if (n["ensemble"]) {
            auto e = n["ensemble"].as<std::string>();
            if (e == "quench") {
                s.ensemble = UnitaryEnsemble::Quench;
            } else if (e == "haar") {
                s.ensemble = UnitaryEnsemble::Haar;
            } else {
                invalid("protocol.ensemble must be quench or haar");
            }
        }
        read(n, "grid_points", s.grid_points);
        read(n, "bootstrap", s.bootstrap);
    }
    if (auto n = root["noise"]) {
        check_keys(n, "noise", {"p_dep", "p_loss", "p_read"});
        read(n, "p_dep", s.noise.p_dep);
        read(n, "p_loss", s.noise.p_loss);
        read(n, "p_read", s.noise.p_read);
    }
    read(root, "seed", s.seed);
    read(root, "workers", s.workers);
    read(root, "tolerance", s.tol);
    if (auto n = root["berry"]) {
        check_keys(n, "berry", {"steps_x", "steps_y", "multiplet"});
        read(n, "steps_x", s.berry_steps_x);
        read(n, "steps_y", s.berry_steps_y);
        read(n, "multiplet", s.multiplet);
    }
    if (auto n = root["success"]) {
        check_keys(n, "success", {"repetitions", "expected", "extraction", "axis", "values"});
        read(n, "repetitions", s.repetitions);
        read(n, "expected", s.expected);
        if (n["extraction"]) {
            auto e = n["extraction"].as<std::string>();
            if (e == "winding") {
                s.extraction = Extraction::Winding;
            } else if (e == "fit") {
                s.extraction = Extraction::Fit;
            } else {
                invalid("success.extraction must be winding or fit");
            }
        }
        read(n, "axis", s.success_axis);
        read(n, "values", s.success_values);
    }
    if (auto n = root["sweep"]) {
        check_keys(n, "sweep", {"axis", "mode", "values"});
        read(n, "axis", s.sweep_axis);
        read(n, "mode", s.sweep_mode);
        read(n, "values", s.sweep_values);
    }
    if (auto n = root["fit"]) {
        check_keys(n, "fit", {"candidates", "offset_harmonics", "input"});
        read(n, "candidates", s.fit_candidates);
        read(n, "offset_harmonics", s.fit_offsets);
        read(n, "input", s.fit_input);
    }
    if (s.grid_points < 1 || s.workers < 1 || s.repetitions < 0) {
        invalid("grid_points and workers must be positive, repetitions nonnegative");
    }
}

}  // namespace

Settings load_settings(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw Error(ErrorKind::Io, "cannot read config " + path);
    }
    std::stringstream buf;
    buf << f.rdbuf();
    Settings s;
    s.text = buf.str();
    try {
        YAML::Node root = YAML::Load(s.text);
        if (root.IsNull()) {
            root = YAML::Node(YAML::NodeType::Map);
        }
        parse(root, s);
    } catch (const YAML::Exception &e) {
        invalid(std::string("config: ") + e.what());
    }
    return s;
}

LatticeGeometry make_geometry(const Settings &s) {
    if (s.state_kind == "pump") {
        return LatticeGeometry(3, s.pump_height, Boundary::Open);
    }
    return LatticeGeometry(s.n_x, s.n_y, s.boundary);
}

void place_regions(const Settings &s, Problem &p) {
    if (s.r1_origin || s.r2_origin) {
        if (!s.r1_origin || !s.r2_origin) {
            invalid("give both r1_origin and r2_origin or neither");
        }
        p.r1 = Region(p.geometry, *s.r1_origin, s.ell1, s.ell_y);
        p.r2 = Region(p.geometry, *s.r2_origin, s.ell2, s.ell_y);
    } else {
        std::tie(p.r1, p.r2) = centered_regions(p.geometry, s.ell1, s.ell2, s.ell_y);
    }
    if (p.r1.overlaps(p.r2)) {
        throw Error(ErrorKind::RegionOverlap, "regions " + p.r1.describe() + " and " + p.r2.describe() + " overlap");
    }
    p.defect = region_defect(p.r1, s.s);
    if (s.defect_ell_y) {
        p.defect.ell_y = *s.defect_ell_y;
    }
    if (s.defect_y_origin) {
        p.defect.y_origin = *s.defect_y_origin;
    }
    p.defect.validate();
}

Problem make_problem(const Settings &s) {
    Problem p;
    if (s.state_kind == "pump") {
        PumpBenchmark b = polarization_pump(s.pump_height, s.pump_r2_rows);
        p.geometry = b.geometry;
        p.state = b.state;
        p.r1 = b.r1;
        p.r2 = b.r2;
        p.defect = b.defect;
        p.defect.s = s.s;
        return p;
    }
    p.geometry = make_geometry(s);
    if (s.state_kind == "checkpoint") {
        p.state = load_checkpoint(s.checkpoint, p.geometry.n_sites(), s.particles);
    } else {
        auto basis = enumerate_basis(p.geometry.n_sites(), s.particles);
        p.state = ground_state(build_hofstadter(p.geometry, basis, s.hamiltonian), s.tol).state;
    }
    place_regions(s, p);
    return p;
}

ProtocolConfig make_protocol(const Settings &s, const Problem &p) {
    ProtocolConfig c;
    c.quench.region = p.r1;
    c.quench.hopping = s.quench_hopping;
    c.quench.disorder = s.quench_disorder;
    c.quench.step_time = s.quench_step_time;
    c.quench.steps = s.quench_steps;
    c.defect = p.defect;
    c.r1 = p.r1;
    c.r2 = p.r2;
    c.n_unitaries = s.n_unitaries;
    c.shots = s.shots;
    c.grid = theta_grid(s.grid_points);
    c.seed = s.seed.value_or(0);
    c.noise = s.noise;
    c.ensemble = s.ensemble;
    c.bootstrap = s.bootstrap;
    c.validate();
    return c;
}

void save_checkpoint(const std::string &path, const FockState &state) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw Error(ErrorKind::Io, "cannot write " + path);
    }
    const int32_t header[2] = {state.basis->n_sites(), state.basis->n_particles()};
    const uint64_t dim = state.dimension();
    f.write(reinterpret_cast<const char *>(header), sizeof header);
    f.write(reinterpret_cast<const char *>(&dim), sizeof dim);
    f.write(reinterpret_cast<const char *>(state.amplitudes.data()),
            static_cast<std::streamsize>(dim * sizeof(cdouble)));
    if (!f) {
        throw Error(ErrorKind::Io, "write to " + path + " failed");
    }
}

FockState load_checkpoint(const std::string &path, int n_sites, int n_particles) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorKind::Io, "cannot read checkpoint " + path);
    }
    int32_t header[2] = {0, 0};
    uint64_t dim = 0;
    f.read(reinterpret_cast<char *>(header), sizeof header);
    f.read(reinterpret_cast<char *>(&dim), sizeof dim);
    if (!f || header[0] != n_sites || header[1] != n_particles) {
        throw Error(ErrorKind::GeometryMismatch, "checkpoint " + path + " does not match the lattice and particle number");
    }
    auto basis = enumerate_basis(n_sites, n_particles);
    if (dim != basis->dimension()) {
        throw Error(ErrorKind::Io, "checkpoint " + path + " has the wrong dimension");
    }
    CVector amp(static_cast<Eigen::Index>(dim));
    f.read(reinterpret_cast<char *>(amp.data()), static_cast<std::streamsize>(dim * sizeof(cdouble)));
    if (!f) {
        throw Error(ErrorKind::Io, "checkpoint " + path + " is truncated");
    }
    return FockState(basis, amp);
}

}  // namespace mbcn::cli
