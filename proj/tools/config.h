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


#ifndef MBCN_TOOLS_CONFIG_H
#define MBCN_TOOLS_CONFIG_H

#include <optional>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "mbcn/protocol.h"

namespace mbcn::cli {

/// Everything a campaign document can set. Physical quantities are in units of
/// the hopping J (energies) and 1/J (times).
struct Settings {
    std::string text;

    int n_x = 4;
    int n_y = 6;
    Boundary boundary = Boundary::Open;
    int particles = 4;
    HofstadterSpec hamiltonian;

    /// hofstadter | pump | checkpoint
    std::string state_kind = "hofstadter";
    int pump_height = 3;
    int pump_r2_rows = 1;
    std::string checkpoint;

    int ell1 = 2;
    int ell2 = 2;
    int ell_y = 2;
    std::optional<Coord> r1_origin;
    std::optional<Coord> r2_origin;

    int s = 1;
    std::optional<int> defect_ell_y;
    std::optional<int> defect_y_origin;

    double quench_hopping = 1.0;
    double quench_disorder = 1.0;
    double quench_step_time = 1.0;
    int quench_steps = 20;

    int n_unitaries = 1;
    int64_t shots = kExactShots;
    UnitaryEnsemble ensemble = UnitaryEnsemble::Quench;
    int grid_points = 24;
    int bootstrap = 200;
    NoiseSpec noise;

    std::optional<uint64_t> seed;
    int workers = 1;
    double tol = 1e-9;

    int berry_steps_x = 0;
    int berry_steps_y = 6;
    int multiplet = 1;

    int repetitions = 100;
    int expected = 1;
    Extraction extraction = Extraction::Winding;
    std::string success_axis = "shots";
    std::vector<double> success_values;

    std::string sweep_axis;
    std::string sweep_mode = "exact-swap";
    std::vector<double> sweep_values;

    std::vector<int> fit_candidates;
    std::vector<int> fit_offsets;
    std::string fit_input;
};

Settings load_settings(const std::string &path);

/// The resolved problem: lattice, prepared state, regions and defect.
struct Problem {
    LatticeGeometry geometry;
    FockState state;
    Region r1;
    Region r2;
    DefectSpec defect;
};

LatticeGeometry make_geometry(const Settings &s);
Problem make_problem(const Settings &s);
/// Sets R1, R2 and the defect from the region fields on an already prepared problem.
void place_regions(const Settings &s, Problem &p);
ProtocolConfig make_protocol(const Settings &s, const Problem &p);

void save_checkpoint(const std::string &path, const FockState &state);
FockState load_checkpoint(const std::string &path, int n_sites, int n_particles);

}  // namespace mbcn::cli

#endif
