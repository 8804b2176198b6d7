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


// Command-line driver. Every subcommand reads one YAML campaign document and
// writes CSV tables, a JSON summary and manifest.json into --out.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "config.h"
#include "json.hpp"
#include "mbcn/chern.h"
#include "mbcn/error.h"
#include "mbcn/swap_correlator.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mbcn;
using namespace mbcn::cli;

namespace {

constexpr const char *kVersion = "1.0.0";

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Run {
   public:
    Run(std::string command, Settings settings, fs::path out)
        : command_(std::move(command)), settings_(std::move(settings)), out_(std::move(out)) {
        fs::create_directories(out_);
        start_ = std::chrono::steady_clock::now();
        stage_start_ = start_;
    }

    const Settings &settings() const {
        return settings_;
    }
    fs::path path(const std::string &name) const {
        return out_ / name;
    }

    void stage(const std::string &name) {
        auto now = std::chrono::steady_clock::now();
        timings_[name] = std::chrono::duration<double>(now - stage_start_).count();
        stage_start_ = now;
    }

    void write_text(const std::string &name, const std::string &text) {
        std::ofstream f(path(name), std::ios::trunc);
        f << text;
        if (!f) {
            throw Error(ErrorKind::Io, "cannot write " + path(name).string());
        }
        outputs_.insert(name);
    }

    void write_json(const std::string &name, const json &j) {
        write_text(name, j.dump(2) + "\n");
    }

    void note_output(const std::string &name) {
        outputs_.insert(name);
    }

    void finish() {
        json m;
        m["command"] = command_;
        m["version"] = kVersion;
        m["seed"] = settings_.seed.value_or(0);
        m["workers"] = settings_.workers;
        m["config"] = settings_.text;
        m["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        m["timings_s"] = timings_;
        outputs_.insert("manifest.json");
        m["outputs"] = outputs_;
        std::ofstream f(path("manifest.json"), std::ios::trunc);
        f << m.dump(2) << "\n";
    }

   private:
    std::string command_;
    Settings settings_;
    fs::path out_;
    std::chrono::steady_clock::time_point start_, stage_start_;
    std::map<std::string, double> timings_;
    std::set<std::string> outputs_;
};

std::string curve_csv(std::span<const double> grid, std::span<const cdouble> values,
                      std::span<const double> stderr_values = {}) {
    std::string out = "theta,re,im,abs,stderr\n";
    for (size_t i = 0; i < grid.size(); ++i) {
        double se = stderr_values.empty() ? 0.0 : stderr_values[i];
        out += num(grid[i]) + "," + num(values[i].real()) + "," + num(values[i].imag()) + "," +
               num(std::abs(values[i])) + "," + num(se) + "\n";
    }
    return out;
}

json winding_summary(std::span<const cdouble> values) {
    json j;
    double min_abs = INFINITY;
    for (cdouble v : values) {
        min_abs = std::min(min_abs, std::abs(v));
    }
    j["min_abs"] = min_abs;
    try {
        WindingResult w = winding_number(values);
        j["C"] = w.winding;
        j["max_jump"] = w.max_jump;
        j["aliasing_warning"] = w.aliasing_warning;
    } catch (const Error &e) {
        j["C"] = nullptr;
        j["reason"] = e.what();
    }
    return j;
}

json fit_summary(std::span<const cdouble> values, std::span<const double> grid, const Settings &s) {
    json j;
    try {
        FitResult f = fit_depolarized(values, grid, s.fit_candidates, s.fit_offsets);
        j["C"] = f.chern;
        j["amplitude"] = {f.amplitude.real(), f.amplitude.imag()};
        json off = json::array();
        for (cdouble c : f.offset) {
            off.push_back({c.real(), c.imag()});
        }
        j["offset"] = off;
        j["residual"] = f.residual;
        j["runner_up"] = f.runner_up;
        j["runner_up_residual"] = f.runner_up_residual;
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::AmbiguousFit) {
            throw;
        }
        j["C"] = nullptr;
        j["reason"] = e.what();
    }
    return j;
}

json parameters(const Settings &s, const Problem &p) {
    return {{"lattice", {p.geometry.n_x, p.geometry.n_y}},
            {"boundary", std::string(boundary_name(p.geometry.boundary))},
            {"particles", p.state.basis ? p.state.basis->n_particles() : s.particles},
            {"flux", s.hamiltonian.flux},
            {"r1", p.r1.describe()},
            {"r2", p.r2.describe()},
            {"s", p.defect.s},
            {"ell_y", p.defect.ell_y},
            {"seed", s.seed.value_or(0)}};
}

void cmd_groundstate(Run &run) {
    const Settings &s = run.settings();
    LatticeGeometry g = make_geometry(s);
    auto basis = enumerate_basis(g.n_sites(), s.particles);
    GroundState gs = ground_state(build_hofstadter(g, basis, s.hamiltonian), s.tol);
    run.stage("solve");
    save_checkpoint(run.path("state.bin").string(), gs.state);
    run.note_output("state.bin");
    run.write_json("summary.json", {{"energy", gs.energy},
                                    {"gap", gs.gap},
                                    {"residual", gs.residual},
                                    {"degeneracy_warning", gs.degeneracy_warning},
                                    {"dimension", basis->dimension()},
                                    {"lattice", {g.n_x, g.n_y}},
                                    {"boundary", std::string(boundary_name(g.boundary))},
                                    {"particles", s.particles},
                                    {"flux", s.hamiltonian.flux}});
}

void cmd_exact_swap(Run &run) {
    const Settings &s = run.settings();
    Problem p = make_problem(s);
    run.stage("prepare");
    auto grid = theta_grid(s.grid_points);
    SwapCorrelator sc(p.geometry, p.state, p.r1, p.r2, p.defect);
    auto values = sc.evaluate(grid);
    run.stage("correlator");
    run.write_text("swap.csv", curve_csv(grid, values));
    json j = winding_summary(values);
    j["purity"] = sc.purity();
    j["parameters"] = parameters(s, p);
    if (j["C"].is_number()) {
        j["hall_conductance_e2_h"] = j["C"].get<double>() / p.defect.s;
    }
    run.write_json("summary.json", j);
}

std::vector<ShotRecord> campaign_records(Run &run, const Problem &p, const ProtocolConfig &c, bool resume) {
    const PatternLayout layout = layout_of(c.r1, c.r2);
    const std::string file = run.path("records.jsonl").string();
    std::vector<ShotRecord> done;
    if (resume && fs::exists(file)) {
        done = complete_pairs(read_records(file, layout));
        if (done.size() > 2 * static_cast<size_t>(c.n_unitaries)) {
            done.resize(2 * static_cast<size_t>(c.n_unitaries));
        }
    }
    write_records(file, layout, done);
    run.note_output("records.jsonl");
    const int first = static_cast<int>(done.size() / 2);
    auto rest = run_campaign(p.geometry, p.state, c, first, run.settings().workers, [&](const ExperimentPair &pair) {
        const ShotRecord both[2] = {pair.a, pair.b};
        write_records(file, layout, both, true);
    });
    done.insert(done.end(), rest.begin(), rest.end());
    return done;
}

json estimate_summary(const EstimatorResult &est, const Settings &s) {
    json j;
    j["winding"] = winding_summary(est.values);
    j["fit"] = fit_summary(est.values, est.grid, s);
    j["C"] = j["winding"]["C"];
    j["n_unitaries"] = est.n_unitaries;
    j["shots"] = est.shots;
    j["acceptance"] = est.acceptance;
    double max_se = 0;
    for (double e : est.standard_error) {
        max_se = std::max(max_se, e);
    }
    j["max_stderr"] = max_se;
    return j;
}

void cmd_randomized(Run &run, bool resume) {
    const Settings &s = run.settings();
    Problem p = make_problem(s);
    ProtocolConfig c = make_protocol(s, p);
    run.stage("prepare");
    auto records = campaign_records(run, p, c, resume);
    run.stage("campaign");
    auto est = estimate_T(layout_of(c.r1, c.r2), records, c.grid, c.bootstrap, c.seed);
    run.stage("estimate");
    run.write_text("estimate.csv", curve_csv(est.grid, est.values, est.standard_error));
    json j = estimate_summary(est, s);
    j["parameters"] = parameters(s, p);
    if (j["C"].is_number()) {
        j["hall_conductance_e2_h"] = j["C"].get<double>() / p.defect.s;
    }
    run.write_json("summary.json", j);
}

void cmd_resta(Run &run) {
    const Settings &s = run.settings();
    LatticeGeometry g = make_geometry(s);
    auto grid = theta_grid(s.grid_points);
    TwistScan scan = resta_chern(g, s.hamiltonian, s.particles, s.s, grid, s.tol);
    run.stage("scan");
    std::string csv = "theta,re,im,abs,gap\n";
    for (size_t i = 0; i < grid.size(); ++i) {
        csv += num(grid[i]) + "," + num(scan.values[i].real()) + "," + num(scan.values[i].imag()) + "," +
               num(std::abs(scan.values[i])) + "," + num(scan.gaps[i]) + "\n";
    }
    run.write_text("resta.csv", csv);
    double min_gap = INFINITY;
    for (double v : scan.gaps) {
        min_gap = std::min(min_gap, v);
    }
    run.write_json("summary.json", {{"C", scan.chern},
                                    {"s", s.s},
                                    {"hall_conductance_e2_h", static_cast<double>(scan.chern) / s.s},
                                    {"max_jump", scan.max_jump},
                                    {"min_relative_gap", min_gap},
                                    {"grid_points", s.grid_points}});
}

void cmd_chern_oracle(Run &run) {
    const Settings &s = run.settings();
    LatticeGeometry g = make_geometry(s);
    const int steps_x = s.berry_steps_x > 0 ? s.berry_steps_x : s.berry_steps_y * s.s;
    BerryResult b = berry_chern(g, s.hamiltonian, s.particles, s.s, steps_x, s.berry_steps_y, s.tol, s.multiplet);
    run.stage("berry");
    run.write_json("summary.json", {{"C", b.chern},
                                    {"s", s.s},
                                    {"hall_conductance_e2_h", static_cast<double>(b.chern) / s.s},
                                    {"raw", b.raw},
                                    {"max_plaquette", b.max_plaquette},
                                    {"min_link", b.min_link},
                                    {"min_gap", b.min_gap},
                                    {"steps", {steps_x, s.berry_steps_y}},
                                    {"multiplet", s.multiplet}});
}

void cmd_fit(Run &run, const std::string &input_flag) {
    const Settings &s = run.settings();
    std::string input = !input_flag.empty() ? input_flag : s.fit_input;
    if (input.empty()) {
        input = fs::exists(run.path("estimate.csv")) ? run.path("estimate.csv").string() : run.path("swap.csv").string();
    }
    std::ifstream f(input);
    if (!f) {
        throw Error(ErrorKind::Io, "cannot read " + input);
    }
    std::string line;
    std::getline(f, line);
    std::vector<double> grid;
    std::vector<cdouble> values;
    while (std::getline(f, line)) {
        if (line.empty()) {
            continue;
        }
        double t, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &re, &im) != 3) {
            throw Error(ErrorKind::Io, "malformed row in " + input + ": " + line);
        }
        grid.push_back(t);
        values.emplace_back(re, im);
    }
    run.stage("read");
    json j = fit_summary(values, grid, s);
    j["input"] = input;
    j["winding"] = winding_summary(values);
    run.write_json("fit.json", j);
}

void apply_axis(Settings &s, const std::string &axis, double v) {
    const auto i = static_cast<int>(std::lround(v));
    if (axis == "ell_y") {
        s.ell_y = i;
    } else if (axis == "ell1") {
        s.ell1 = i;
    } else if (axis == "ell2") {
        s.ell2 = i;
    } else if (axis == "n_unitaries") {
        s.n_unitaries = i;
    } else if (axis == "shots") {
        s.shots = std::llround(v);
    } else if (axis == "p_dep") {
        s.noise.p_dep = v;
    } else if (axis == "grid_points") {
        s.grid_points = i;
    } else {
        throw Error(ErrorKind::InvalidSpec,
                    "sweep axis must be one of ell_y, ell1, ell2, n_unitaries, shots, p_dep, grid_points");
    }
}

std::string success_row(const Settings &s, const Problem &p) {
    ProtocolConfig c = make_protocol(s, p);
    SuccessEstimate e = success_probability(p.geometry, p.state, c, s.expected, s.repetitions, s.extraction, s.workers);
    return std::to_string(e.successes) + "," + std::to_string(e.repetitions) + "," + num(e.probability) + "," +
           num(e.standard_error);
}

void cmd_success(Run &run) {
    const Settings &base = run.settings();
    if (base.success_axis != "shots" && base.success_axis != "n_unitaries") {
        throw Error(ErrorKind::InvalidSpec, "success.axis must be shots or n_unitaries");
    }
    Problem p = make_problem(base);
    run.stage("prepare");
    std::string csv = base.success_axis + ",successes,repetitions,probability,stderr\n";
    std::vector<double> values = base.success_values;
    if (values.empty()) {
        values.push_back(base.success_axis == "shots" ? static_cast<double>(base.shots) : base.n_unitaries);
    }
    for (double v : values) {
        Settings s = base;
        apply_axis(s, s.success_axis, v);
        csv += num(v) + "," + success_row(s, p) + "\n";
    }
    run.stage("repetitions");
    run.write_text("success.csv", csv);
    run.write_json("summary.json", {{"axis", base.success_axis},
                                    {"expected", base.expected},
                                    {"repetitions", base.repetitions},
                                    {"rows", values.size()},
                                    {"parameters", parameters(base, p)}});
}

void cmd_sweep(Run &run) {
    const Settings &base = run.settings();
    const std::string &mode = base.sweep_mode;
    std::string header;
    if (mode == "exact-swap") {
        header = "value,C,min_abs,max_jump\n";
    } else if (mode == "randomized") {
        header = "value,C,C_fit,min_abs,max_stderr,acceptance\n";
    } else if (mode == "success-prob") {
        header = "value,successes,repetitions,probability,stderr\n";
    } else {
        throw Error(ErrorKind::InvalidSpec, "sweep.mode must be exact-swap, randomized or success-prob");
    }
    auto cell = [](const json &v) { return v.is_number() ? std::to_string(v.get<int>()) : std::string(); };
    std::string csv = header;
    // State preparation only depends on the lattice, not on the swept quantity.
    std::optional<Problem> shared;
    for (double v : base.sweep_values) {
        Settings s = base;
        apply_axis(s, s.sweep_axis, v);
        if (!shared || s.state_kind == "pump") {
            shared = make_problem(s);
        }
        Problem p = *shared;
        if (s.state_kind != "pump") {
            place_regions(s, p);
        }
        std::string row = num(v) + ",";
        if (mode == "exact-swap") {
            auto grid = theta_grid(s.grid_points);
            auto values = swap_T(p.geometry, p.state, p.r1, p.r2, p.defect, grid);
            json w = winding_summary(values);
            row += cell(w["C"]) + "," + num(w["min_abs"].get<double>()) + "," +
                   (w.contains("max_jump") ? num(w["max_jump"].get<double>()) : std::string());
        } else if (mode == "randomized") {
            ProtocolConfig c = make_protocol(s, p);
            auto records = run_campaign(p.geometry, p.state, c, 0, s.workers);
            auto est = estimate_T(layout_of(c.r1, c.r2), records, c.grid, c.bootstrap, c.seed);
            json j = estimate_summary(est, s);
            row += cell(j["C"]) + "," + cell(j["fit"]["C"]) + "," + num(j["winding"]["min_abs"].get<double>()) + "," +
                   num(j["max_stderr"].get<double>()) + "," + num(est.acceptance);
        } else {
            row += success_row(s, p);
        }
        csv += row + "\n";
    }
    run.stage("sweep");
    run.write_text("sweep.csv", csv);
    run.write_json("summary.json",
                   {{"axis", base.sweep_axis}, {"mode", mode}, {"rows", base.sweep_values.size()}});
}

int fail(const std::string &out, const std::string &kind, const std::string &message, int code) {
    json e = {{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << e.dump() << "\n";
    if (!out.empty()) {
        std::error_code ec;
        fs::create_directories(out, ec);
        std::ofstream f(fs::path(out) / "error.json", std::ios::trunc);
        f << e.dump(2) << "\n";
    }
    return code;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Many-body Chern number toolkit"};
    app.require_subcommand(1);
    std::string config_path, out = ".", fit_input;
    std::optional<uint64_t> seed;
    std::optional<int> workers;
    bool resume = false;
    app.add_option("--config", config_path, "YAML campaign document")->required();
    app.add_option("--seed", seed, "master seed (overrides the document)");
    app.add_option("--workers", workers, "worker threads (overrides the document)");
    app.add_option("--out", out, "output directory");
    app.add_flag("--resume", resume, "continue a campaign from out/records.jsonl");

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"groundstate", "ground state energy, gap and checkpoint"},
        {"exact-swap", "exact dressed SWAP correlator on the theta grid"},
        {"randomized", "randomized-measurement campaign and estimator"},
        {"resta", "twist-averaged polarization winding on a periodic lattice"},
        {"chern-oracle", "discretized Berry curvature Chern number"},
        {"fit", "offset fit of a stored correlator table"},
        {"success-prob", "repeated campaigns: probability of the expected integer"},
        {"sweep", "one row per value of a parameter axis"},
    };
    for (const auto &[name, help] : commands) {
        auto *sub = app.add_subcommand(name, help);
        if (name == "fit") {
            sub->add_option("--input", fit_input, "CSV with theta,re,im columns");
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        return fail("", "usage", e.what(), 2);
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        Settings s = load_settings(config_path);
        if (seed) {
            s.seed = *seed;
        }
        if (workers) {
            s.workers = *workers;
        }
        if (s.workers < 1) {
            throw Error(ErrorKind::InvalidSpec, "workers must be positive");
        }
        if (!s.seed) {
            throw Error(ErrorKind::InvalidSpec, "no master seed: set 'seed' in the document or pass --seed");
        }
        Run run(command, s, out);
        if (command == "groundstate") {
            cmd_groundstate(run);
        } else if (command == "exact-swap") {
            cmd_exact_swap(run);
        } else if (command == "randomized") {
            cmd_randomized(run, resume);
        } else if (command == "resta") {
            cmd_resta(run);
        } else if (command == "chern-oracle") {
            cmd_chern_oracle(run);
        } else if (command == "fit") {
            cmd_fit(run, fit_input);
        } else if (command == "success-prob") {
            cmd_success(run);
        } else {
            cmd_sweep(run);
        }
        run.finish();
    } catch (const Error &e) {
        return fail(out, std::string(error_kind_name(e.kind())), e.what(), exit_code_for(e.kind()));
    } catch (const std::exception &e) {
        return fail(out, "internal", e.what(), 1);
    }
    return 0;
}
