// Copyright 2026 The lasiq authors
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

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lasiq/pipeline.hpp"
#include "lasiq/rng.hpp"

namespace {

using nlohmann::json;

struct GlobalFlags {
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    bool quiet = false;
};

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

/// Runs one stage with manifest bookkeeping; the manifest lands next to
/// the primary output as <out>.manifest.json.
int run_one_stage(const std::string& stage, const json& params, const GlobalFlags& flags,
                  const std::string& command) {
    lasiq::StageContext ctx;
    ctx.seed = lasiq::rng::derive_seed(flags.seed, stage, 0);
    ctx.threads = flags.threads;
    ctx.quiet = flags.quiet;
    try {
        lasiq::run_stage(stage, params, ctx);
    } catch (const std::exception& e) {
        std::cerr << "lasiq " << stage << ": " << e.what() << "\n";
        return static_cast<int>(lasiq::exit_code_for_current_exception());
    }
    if (!ctx.outputs.empty()) {
        lasiq::RunManifest manifest;
        manifest.command = command;
        manifest.inputs = ctx.inputs;
        manifest.seed = flags.seed;
        manifest.outputs = ctx.outputs;
        lasiq::write_manifest(manifest, ctx.outputs.front() + ".manifest.json");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lasiq: frequency-trim planning and simulation toolkit"};
    app.require_subcommand(1);

    GlobalFlags flags;
    if (const char* env_seed = std::getenv("LASIQ_SEED")) {
        flags.seed = std::strtoull(env_seed, nullptr, 10);
        flags.seed_set = true;
    }
    app.add_option("--seed", flags.seed, "top-level RNG seed (env LASIQ_SEED)")
        ->each([&](const std::string&) { flags.seed_set = true; });
    app.add_option("--threads", flags.threads, "worker threads for Monte Carlo loops")
        ->check(CLI::PositiveNumber);
    app.add_flag("--quiet", flags.quiet, "suppress progress output");

    const std::string command = join_args(argc, argv);

    // lattice
    auto* lattice = app.add_subcommand("lattice", "generate a heavy-hex chip spec");
    std::string lat_preset, lat_out = "chip.json";
    int lat_rows = 1, lat_cols = 1;
    double lat_rn_nominal = 9400.0, lat_rn_spread = 0.04, lat_f_sigma = 0.0;
    bool lat_raw = false;
    lattice->add_option("--preset", lat_preset, "falcon or hummingbird");
    lattice->add_option("--rows", lat_rows, "hex cell rows");
    lattice->add_option("--cols", lat_cols, "hex cell columns");
    lattice->add_option("--rn-nominal", lat_rn_nominal, "nominal junction resistance (Ohm)");
    lattice->add_option("--rn-spread-rel", lat_rn_spread, "fractional resistance spread");
    lattice->add_option("--f-sigma-mhz", lat_f_sigma, "residual f01 scatter (MHz)");
    lattice->add_flag("--no-synthesize", lat_raw, "skip synthetic resistance records");
    lattice->add_option("--out", lat_out, "output chip JSON")->required();

    // fit
    auto* fit = app.add_subcommand("fit", "fit the f01(Rn) power law from a chip");
    std::string fit_chip, fit_out = "model.json", fit_residuals;
    bool fit_pin = false;
    fit->add_option("--chip", fit_chip, "chip JSON")->required();
    fit->add_option("--out", fit_out, "output model JSON")->required();
    fit->add_option("--residuals-out", fit_residuals, "optional residual CSV");
    fit->add_flag("--pin-exponent", fit_pin, "pin p = -0.5");

    // collisions
    auto* collisions = app.add_subcommand("collisions", "report NN frequency collisions");
    std::string col_chip, col_freqs, col_bounds, col_out = "collisions.csv";
    collisions->add_option("--chip", col_chip, "chip JSON")->required();
    collisions->add_option("--freqs", col_freqs, "frequency CSV (qubit_id, f01_mhz)");
    collisions->add_option("--bounds", col_bounds, "bounds JSON");
    collisions->add_option("--out", col_out, "violation CSV")->required();

    // yield
    auto* yield_cmd = app.add_subcommand("yield", "Monte Carlo collision-free yield");
    std::string yld_chip, yld_targets, yld_bounds, yld_grid = "0:40:2",
                yld_out = "yield.csv";
    int yld_trials = 10000;
    yield_cmd->add_option("--chip", yld_chip, "chip JSON")->required();
    yield_cmd->add_option("--targets", yld_targets, "target CSV (plan or freqs)")->required();
    yield_cmd->add_option("--sigma-grid", yld_grid, "lo:hi:step in MHz");
    yield_cmd->add_option("--trials", yld_trials, "Monte Carlo trials per point");
    yield_cmd->add_option("--bounds", yld_bounds, "bounds JSON");
    yield_cmd->add_option("--out", yld_out, "yield CSV")->required();

    // plan
    auto* plan = app.add_subcommand("plan", "generate a collision-free tuning plan");
    std::string plan_chip, plan_model, plan_constraints, plan_out = "plan.csv";
    plan->add_option("--chip", plan_chip, "chip JSON")->required();
    plan->add_option("--model", plan_model, "power-law model JSON")->required();
    plan->add_option("--constraints", plan_constraints, "constraints JSON");
    plan->add_option("--out", plan_out, "plan CSV")->required();

    // anneal
    auto* anneal = app.add_subcommand("anneal", "simulate the anneal over a plan");
    std::string ann_chip, ann_targets, ann_config, ann_out = "outcomes.csv";
    anneal->add_option("--chip", ann_chip, "chip JSON")->required();
    anneal->add_option("--targets", ann_targets, "plan CSV with r_target_ohm")->required();
    anneal->add_option("--config", ann_config, "anneal config JSON");
    anneal->add_option("--out", ann_out, "outcome CSV")->required();

    // gate-error
    auto* gate = app.add_subcommand("gate-error", "CR gate error vs detuning sweep");
    std::string gate_pair, gate_sweep = "-400:400:10", gate_out = "sweep.csv";
    double gate_time = 400.0, gate_tol = 1e-8;
    gate->add_option("--pair", gate_pair, "pair JSON")->required();
    gate->add_option("--sweep", gate_sweep, "detuning grid lo:hi:step (MHz)");
    gate->add_option("--gate-time", gate_time, "gate duration (ns)");
    gate->add_option("--solver-tol", gate_tol, "propagator tolerance");
    gate->add_option("--out", gate_out, "sweep CSV")->required();

    // zz
    auto* zz = app.add_subcommand("zz", "static ZZ of a transmon pair");
    std::string zz_pair, zz_out;
    zz->add_option("--pair", zz_pair, "pair JSON")->required();
    zz->add_option("--out", zz_out, "optional output JSON");

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "run a multi-stage pipeline config");
    std::string pipe_config, pipe_manifest = "manifest.json";
    pipeline->add_option("config", pipe_config, "pipeline JSON")->required();
    pipeline->add_option("--manifest", pipe_manifest, "manifest output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (lattice->parsed()) {
            json params = {{"rows", lat_rows},
                           {"cols", lat_cols},
                           {"rn_nominal_ohm", lat_rn_nominal},
                           {"rn_spread_rel", lat_rn_spread},
                           {"f_sigma_mhz", lat_f_sigma},
                           {"synthesize", !lat_raw},
                           {"out", lat_out}};
            if (!lat_preset.empty()) params["preset"] = lat_preset;
            return run_one_stage("lattice", params, flags, command);
        }
        if (fit->parsed()) {
            json params = {{"chip", fit_chip}, {"out", fit_out}, {"pin_exponent", fit_pin}};
            if (!fit_residuals.empty()) params["residuals_out"] = fit_residuals;
            return run_one_stage("fit", params, flags, command);
        }
        if (collisions->parsed()) {
            json params = {{"chip", col_chip}, {"out", col_out}};
            if (!col_freqs.empty()) params["freqs"] = col_freqs;
            if (!col_bounds.empty()) params["bounds"] = col_bounds;
            return run_one_stage("collisions", params, flags, command);
        }
        if (yield_cmd->parsed()) {
            json params = {{"chip", yld_chip},     {"targets", yld_targets},
                           {"sigma_grid", yld_grid}, {"trials", yld_trials},
                           {"out", yld_out}};
            if (!yld_bounds.empty()) params["bounds"] = yld_bounds;
            return run_one_stage("yield", params, flags, command);
        }
        if (plan->parsed()) {
            json params = {{"chip", plan_chip}, {"model", plan_model}, {"out", plan_out}};
            if (!plan_constraints.empty()) params["constraints"] = plan_constraints;
            return run_one_stage("plan", params, flags, command);
        }
        if (anneal->parsed()) {
            json params = {{"chip", ann_chip}, {"targets", ann_targets}, {"out", ann_out}};
            if (!ann_config.empty()) params["config"] = ann_config;
            return run_one_stage("anneal", params, flags, command);
        }
        if (gate->parsed()) {
            json params = {{"pair", gate_pair},
                           {"sweep", gate_sweep},
                           {"gate_time_ns", gate_time},
                           {"solver_tol", gate_tol},
                           {"out", gate_out}};
            return run_one_stage("gate-error", params, flags, command);
        }
        if (zz->parsed()) {
            json params = {{"pair", zz_pair}};
            if (!zz_out.empty()) params["out"] = zz_out;
            return run_one_stage("zz", params, flags, command);
        }
        if (pipeline->parsed()) {
            const auto result = lasiq::run_pipeline(pipe_config, flags.seed, flags.seed_set,
                                                    flags.threads, flags.quiet, pipe_manifest);
            if (result.exit_code != lasiq::ExitCode::ok)
                std::cerr << "lasiq pipeline: stage \"" << result.failed_stage
                          << "\" failed: " << result.message << "\n";
            else if (!flags.quiet)
                std::cout << "pipeline: " << result.artifacts.size()
                          << " artifacts, manifest -> " << pipe_manifest << "\n";
            return static_cast<int>(result.exit_code);
        }
    } catch (const std::exception& e) {
        std::cerr << "lasiq: " << e.what() << "\n";
        return static_cast<int>(lasiq::exit_code_for_current_exception());
    }
    return 0;
}
