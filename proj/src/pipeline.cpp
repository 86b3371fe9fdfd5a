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

#include "lasiq/pipeline.hpp"

#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include "lasiq/anneal_sim.hpp"
#include "lasiq/collision.hpp"
#include "lasiq/freq_model.hpp"
#include "lasiq/gate_model.hpp"
#include "lasiq/io_util.hpp"
#include "lasiq/lattice.hpp"
#include "lasiq/planner.hpp"
#include "lasiq/rng.hpp"
#include "lasiq/sha256.hpp"
#include "lasiq/yield_mc.hpp"

namespace lasiq {

using nlohmann::json;

namespace {

json json_from_file(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

/// A parameter that may be an inline object or a path to a JSON file.
json resolve_object(const json& params, const std::string& key, StageContext& ctx) {
    if (!params.contains(key)) return json::object();
    const json& value = params.at(key);
    if (value.is_string()) {
        const std::string path = value.get<std::string>();
        ctx.note_input(path);
        return json_from_file(path);
    }
    if (value.is_object()) return value;
    throw SchemaError(key + " must be a path or an object");
}

CollisionBounds bounds_from_json(const json& j) {
    CollisionBounds b;
    try {
        b.d1_mhz = j.value("d1_mhz", b.d1_mhz);
        b.d2_mhz = j.value("d2_mhz", b.d2_mhz);
        b.d3_mhz = j.value("d3_mhz", b.d3_mhz);
        b.d4_max_detuning_mhz = j.value("d4_max_detuning_mhz", b.d4_max_detuning_mhz);
        b.multiplier = j.value("multiplier", b.multiplier);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("bounds: ") + e.what());
    }
    b.validate();
    return b;
}

PlanConstraints constraints_from_json(const json& j) {
    PlanConstraints c;
    try {
        c.f_purcell_max_mhz = j.value("f_purcell_max_mhz", c.f_purcell_max_mhz);
        c.max_dr_rel = j.value("max_dr_rel", c.max_dr_rel);
        c.spacing_min_mhz = j.value("spacing_min_mhz", c.spacing_min_mhz);
        c.spacing_max_mhz = j.value("spacing_max_mhz", c.spacing_max_mhz);
        if (j.contains("bounds")) c.bounds = bounds_from_json(j.at("bounds"));
        if (j.contains("level_set_mhz"))
            c.level_set_mhz = j.at("level_set_mhz").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("constraints: ") + e.what());
    }
    c.validate();
    return c;
}

AnnealConfig anneal_config_from_json(const json& j) {
    AnnealConfig c;
    try {
        c.band_rel = j.value("band_rel", c.band_rel);
        c.step_fraction = j.value("step_fraction", c.step_fraction);
        c.step_sigma_rel = j.value("step_sigma_rel", c.step_sigma_rel);
        c.min_step_rel = j.value("min_step_rel", c.min_step_rel);
        c.saturation_mean_rel = j.value("saturation_mean_rel", c.saturation_mean_rel);
        c.saturation_sigma_rel = j.value("saturation_sigma_rel", c.saturation_sigma_rel);
        c.max_exposures = j.value("max_exposures", c.max_exposures);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("anneal config: ") + e.what());
    }
    c.validate();
    return c;
}

PowerLawModel model_from_json(const json& j) {
    PowerLawModel m;
    try {
        m.a = j.at("a").get<double>();
        m.p = j.at("p").get<double>();
        m.sigma_f_mhz = j.value("sigma_f_mhz", 0.0);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("model: ") + e.what());
    }
    m.validate();
    return m;
}

TransmonPair pair_from_json(const json& j) {
    TransmonPair p;
    try {
        p.f_c_mhz = j.at("f_c_mhz").get<double>();
        p.f_t_mhz = j.at("f_t_mhz").get<double>();
        p.delta_c_mhz = j.value("delta_c_mhz", p.delta_c_mhz);
        p.delta_t_mhz = j.value("delta_t_mhz", p.delta_t_mhz);
        p.j_mhz = j.value("j_mhz", p.j_mhz);
        p.levels = j.value("levels", p.levels);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("pair: ") + e.what());
    }
    p.validate();
    return p;
}

ChipState chip_from_params(const json& params, StageContext& ctx) {
    if (!params.contains("chip")) throw SchemaError("stage requires a \"chip\" path");
    const std::string path = params.at("chip").get<std::string>();
    ctx.note_input(path);
    return load_chip(path);
}

/// Plan/targets CSV: accepts either a plan table (f_target_mhz /
/// r_target_ohm per qubit) or a bare frequency table (f01_mhz).
std::unordered_map<int, double> targets_from_csv(const std::string& path,
                                                 const std::string& preferred,
                                                 const std::string& fallback) {
    const CsvTable table = read_csv(path);
    const int id_col = table.require_column("qubit_id");
    int col = table.column(preferred);
    if (col < 0) col = table.column(fallback);
    if (col < 0)
        throw SchemaError(path + " has neither " + preferred + " nor " + fallback);
    std::unordered_map<int, double> out;
    for (const auto& row : table.rows) {
        try {
            out[std::stoi(row[id_col])] = std::stod(row[col]);
        } catch (const std::exception&) {
            throw SchemaError("bad numeric cell in " + path);
        }
    }
    return out;
}

void emit(StageContext& ctx, const std::string& path, const std::string& content) {
    write_text_file(path, content);
    ctx.note_output(path);
}

std::string require_out(const json& params) {
    if (!params.contains("out")) throw SchemaError("stage requires an \"out\" path");
    return params.at("out").get<std::string>();
}

void stage_lattice(const json& params, StageContext& ctx) {
    ChipState chip;
    if (params.contains("preset"))
        chip = build_preset(params.at("preset").get<std::string>());
    else
        chip = build_heavy_hex(params.value("rows", 1), params.value("cols", 1));
    if (params.value("synthesize", true)) {
        SyntheticOptions opts;
        opts.rn_nominal_ohm = params.value("rn_nominal_ohm", opts.rn_nominal_ohm);
        opts.rn_spread_rel = params.value("rn_spread_rel", opts.rn_spread_rel);
        opts.f_sigma_mhz = params.value("f_sigma_mhz", opts.f_sigma_mhz);
        synthesize_records(chip, opts, ctx.seed);
    }
    const std::string out = require_out(params);
    emit(ctx, out, chip_to_json_text(chip));
    if (!ctx.quiet)
        std::cout << "lattice: " << chip.name << " with " << chip.qubits.size()
                  << " qubits, " << chip.edges.size() << " edges -> " << out << "\n";
}

void stage_fit(const json& params, StageContext& ctx) {
    const ChipState chip = chip_from_params(params, ctx);
    std::vector<std::pair<double, double>> points;
    std::vector<int> ids;
    for (const auto& q : chip.qubits) {
        if (!q.f01_mhz) continue;
        points.emplace_back(q.r_n_ohm, *q.f01_mhz);
        ids.push_back(q.id);
    }
    const auto [model, stats] =
        fit_power_law(points, &ids, params.value("pin_exponent", false));

    json out_doc;
    out_doc["a"] = model.a;
    out_doc["p"] = model.p;
    out_doc["sigma_f_mhz"] = model.sigma_f_mhz;
    const std::string out = require_out(params);
    emit(ctx, out, out_doc.dump(2) + "\n");

    if (params.contains("residuals_out")) {
        CsvTable table;
        table.header = {"qubit_id", "residual_mhz"};
        for (const auto& [id, res] : stats.residuals)
            table.rows.push_back({std::to_string(id), format_double(res)});
        emit(ctx, params.at("residuals_out").get<std::string>(), to_csv(table));
    }
    if (!ctx.quiet)
        std::cout << "fit: a=" << format_double(model.a) << " p=" << format_double(model.p)
                  << " sigma_f=" << format_double(model.sigma_f_mhz) << " MHz over "
                  << points.size() << " qubits -> " << out << "\n";
}

void stage_collisions(const json& params, StageContext& ctx) {
    const ChipState chip = chip_from_params(params, ctx);
    std::unordered_map<int, double> freqs;
    if (params.contains("freqs")) {
        const std::string path = params.at("freqs").get<std::string>();
        ctx.note_input(path);
        freqs = targets_from_csv(path, "f01_mhz", "f_target_mhz");
    } else {
        for (const auto& q : chip.qubits)
            if (q.f01_mhz) freqs[q.id] = *q.f01_mhz;
    }
    const CollisionBounds bounds = bounds_from_json(resolve_object(params, "bounds", ctx));
    const CollisionReport report = chip_collisions(chip, freqs, bounds);

    CsvTable table;
    table.header = {"control", "target", "type", "margin_mhz"};
    for (const auto& v : report.violations)
        table.rows.push_back({std::to_string(v.control), std::to_string(v.target),
                              std::to_string(static_cast<int>(v.type)),
                              format_double(v.margin_mhz)});
    const std::string out = require_out(params);
    emit(ctx, out, to_csv(table));
    if (!ctx.quiet)
        std::cout << "collisions: " << report.total() << " violations (type1="
                  << report.counts[0] << " type2=" << report.counts[1]
                  << " type3=" << report.counts[2] << " type4=" << report.counts[3]
                  << "), worst margin " << format_double(report.worst_margin_mhz)
                  << " MHz -> " << out << "\n";
}

void stage_yield(const json& params, StageContext& ctx) {
    const ChipState chip = chip_from_params(params, ctx);
    if (!params.contains("targets")) throw SchemaError("yield requires \"targets\"");
    const std::string targets_path = params.at("targets").get<std::string>();
    ctx.note_input(targets_path);
    const auto targets = targets_from_csv(targets_path, "f_target_mhz", "f01_mhz");
    const CollisionBounds bounds = bounds_from_json(resolve_object(params, "bounds", ctx));
    const auto grid = parse_grid(params.value("sigma_grid", "0:40:2"));
    const int trials = params.value("trials", 10000);

    const YieldCurve curve =
        yield_curve(chip, targets, grid, bounds, trials, ctx.seed, ctx.threads);

    CsvTable table;
    table.header = {"sigma_mhz", "yield", "ci", "mean_collisions"};
    for (std::size_t i = 0; i < curve.points.size(); ++i)
        table.rows.push_back({format_double(curve.sigma_grid_mhz[i]),
                              format_double(curve.points[i].yield),
                              format_double(curve.points[i].ci_halfwidth),
                              format_double(curve.points[i].mean_collisions)});
    const std::string out = require_out(params);
    emit(ctx, out, to_csv(table));
    if (!ctx.quiet)
        std::cout << "yield: " << grid.size() << " sigma points, " << trials
                  << " trials each -> " << out << "\n";
}

void stage_plan(const json& params, StageContext& ctx) {
    const ChipState chip = chip_from_params(params, ctx);
    if (!params.contains("model")) throw SchemaError("plan requires a \"model\" path");
    const std::string model_path = params.at("model").get<std::string>();
    ctx.note_input(model_path);
    const PowerLawModel model = model_from_json(json_from_file(model_path));
    const PlanConstraints constraints =
        constraints_from_json(resolve_object(params, "constraints", ctx));

    const FrequencyPlan plan = generate_plan(chip, model, constraints, ctx.seed);
    const PlanReport report = validate_plan(chip, model, plan, constraints);

    std::set<int> skip(plan.skip_set.begin(), plan.skip_set.end());
    std::set<int> infeasible;
    for (const auto& inf : plan.infeasible) infeasible.insert(inf.qubit);

    CsvTable table;
    table.header = {"qubit_id", "f_target_mhz", "r_target_ohm", "df_mhz", "dr_rel",
                    "status"};
    for (const auto& [id, f] : plan.targets_f_mhz) {
        std::string status = infeasible.count(id) ? "infeasible"
                             : skip.count(id)     ? "skip"
                                                  : "tuned";
        table.rows.push_back({std::to_string(id), format_double(f),
                              format_double(plan.targets_r_ohm.at(id)),
                              format_double(plan.shifts_f_mhz.at(id)),
                              format_double(plan.shifts_r_rel.at(id)), status});
    }
    const std::string out = require_out(params);
    emit(ctx, out, to_csv(table));

    if (!ctx.quiet) {
        std::cout << "plan: worst collision margin "
                  << format_double(plan.worst_margin_mhz) << " MHz, "
                  << plan.skip_set.size() << " untuned, " << plan.infeasible.size()
                  << " infeasible -> " << out << "\n";
        for (const auto& inf : plan.infeasible)
            std::cout << "plan: infeasible qubit " << inf.qubit << ": " << inf.reason
                      << "\n";
        if (!report.all_pass())
            std::cout << "plan: validation reported " << report.failures.size()
                      << " failing checks\n";
    }
}

void stage_anneal(const json& params, StageContext& ctx) {
    const ChipState chip = chip_from_params(params, ctx);
    if (!params.contains("targets")) throw SchemaError("anneal requires \"targets\"");
    const std::string targets_path = params.at("targets").get<std::string>();
    ctx.note_input(targets_path);
    const auto targets_u = targets_from_csv(targets_path, "r_target_ohm", "r_target_ohm");
    std::map<int, double> targets(targets_u.begin(), targets_u.end());
    const AnnealConfig config = anneal_config_from_json(resolve_object(params, "config", ctx));

    const auto outcomes = anneal_chip(chip, targets, config, ctx.seed);

    CsvTable table;
    table.header = {"qubit_id", "r0", "r_target", "r_final", "exposures", "status",
                    "dev_rel"};
    for (const auto& o : outcomes)
        table.rows.push_back({std::to_string(o.qubit_id), format_double(o.r0_ohm),
                              format_double(o.r_target_ohm), format_double(o.final_r_ohm),
                              std::to_string(o.exposures), to_string(o.status),
                              format_double(o.final_dev_rel)});
    const std::string out = require_out(params);
    emit(ctx, out, to_csv(table));

    if (!ctx.quiet && !outcomes.empty()) {
        const auto stats = success_stats(outcomes, {0.0, 0.01, 0.03, 0.08, 0.10, 0.20});
        std::cout << "anneal: success " << stats.successes << "/" << stats.total
                  << " (rate " << format_double(stats.success_rate) << "), RMS dev "
                  << format_double(stats.rms_dev_successes) << " -> " << out << "\n";
    }
}

void stage_gate_error(const json& params, StageContext& ctx) {
    if (!params.contains("pair")) throw SchemaError("gate-error requires a \"pair\" path");
    const std::string pair_path = params.at("pair").get<std::string>();
    ctx.note_input(pair_path);
    const TransmonPair pair = pair_from_json(json_from_file(pair_path));
    const auto grid = parse_grid(params.value("sweep", "-400:400:10"));
    const double gate_time = params.value("gate_time_ns", 400.0);
    const double tol = params.value("solver_tol", 1e-8);

    const auto curve = error_vs_detuning_sweep(pair, grid, gate_time, ctx.seed, tol);

    CsvTable table;
    table.header = {"detuning_mhz", "error", "zz_khz", "status"};
    for (const auto& pt : curve)
        table.rows.push_back({format_double(pt.detuning_mhz), format_double(pt.error),
                              format_double(pt.zz_khz), pt.status});
    const std::string out = require_out(params);
    emit(ctx, out, to_csv(table));
    if (!ctx.quiet)
        std::cout << "gate-error: " << curve.size() << " detuning points -> " << out
                  << "\n";
}

void stage_zz(const json& params, StageContext& ctx) {
    if (!params.contains("pair")) throw SchemaError("zz requires a \"pair\" path");
    const std::string pair_path = params.at("pair").get<std::string>();
    ctx.note_input(pair_path);
    const TransmonPair pair = pair_from_json(json_from_file(pair_path));
    const ZZResult zz = static_zz(pair);

    json out_doc;
    out_doc["zz_khz"] = zz.zz_khz;
    out_doc["flagged"] = zz.flagged;
    try {
        out_doc["zz_perturbative_khz"] = static_zz_perturbative(pair);
    } catch (const std::invalid_argument&) {
        out_doc["zz_perturbative_khz"] = nullptr;  // at a pole
    }
    if (params.contains("out")) {
        emit(ctx, params.at("out").get<std::string>(), out_doc.dump(2) + "\n");
    }
    if (!ctx.quiet)
        std::cout << "zz: " << format_double(zz.zz_khz) << " kHz"
                  << (zz.flagged ? " (flagged: near-degenerate)" : "") << "\n";
}

}  // namespace

void StageContext::note_input(const std::string& path) {
    inputs[path] = sha256_file(path);
}

void StageContext::note_output(const std::string& path) { outputs.push_back(path); }

nlohmann::json RunManifest::to_json() const {
    json doc;
    doc["command"] = command;
    doc["inputs"] = json::object();
    for (const auto& [path, digest] : inputs) doc["inputs"][path] = digest;
    doc["seed"] = seed;
    doc["versions"] = {{"lasiq", version}};
    doc["outputs"] = outputs;
    return doc;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    write_text_file(path, manifest.to_json().dump(2) + "\n");
}

void run_stage(const std::string& stage, const nlohmann::json& params, StageContext& ctx) {
    if (stage == "lattice") return stage_lattice(params, ctx);
    if (stage == "fit") return stage_fit(params, ctx);
    if (stage == "collisions") return stage_collisions(params, ctx);
    if (stage == "yield") return stage_yield(params, ctx);
    if (stage == "plan") return stage_plan(params, ctx);
    if (stage == "anneal") return stage_anneal(params, ctx);
    if (stage == "gate-error") return stage_gate_error(params, ctx);
    if (stage == "zz") return stage_zz(params, ctx);
    throw UnknownStageError("unknown pipeline stage: " + stage);
}

PipelineResult run_pipeline(const std::string& config_path, std::uint64_t seed,
                            bool seed_overridden, int threads, bool quiet,
                            const std::string& manifest_out) {
    PipelineResult result;
    RunManifest manifest;
    manifest.command = "pipeline " + config_path;

    json config;
    try {
        manifest.inputs[config_path] = sha256_file(config_path);
        config = json_from_file(config_path);
        if (!config.contains("stages") || !config.at("stages").is_array())
            throw SchemaError("pipeline config requires a \"stages\" array");
        if (!seed_overridden) seed = config.value("seed", std::uint64_t{0});
        manifest.seed = seed;

        std::size_t index = 0;
        for (const auto& stage_entry : config.at("stages")) {
            if (!stage_entry.is_object() || !stage_entry.contains("stage"))
                throw SchemaError("each pipeline stage needs a \"stage\" name");
            const std::string name = stage_entry.at("stage").get<std::string>();
            StageContext ctx;
            ctx.seed = rng::derive_seed(seed, name, index);
            ctx.threads = threads;
            ctx.quiet = quiet;
            try {
                run_stage(name, stage_entry, ctx);
            } catch (...) {
                for (const auto& [p, d] : ctx.inputs) manifest.inputs[p] = d;
                result.failed_stage = name;
                throw;
            }
            for (const auto& [p, d] : ctx.inputs) manifest.inputs[p] = d;
            for (const auto& o : ctx.outputs) {
                manifest.outputs.push_back(o);
                result.artifacts.push_back(o);
            }
            ++index;
        }
        result.exit_code = ExitCode::ok;
    } catch (const std::exception& e) {
        result.exit_code = exit_code_for_current_exception();
        result.message = e.what();
    }
    if (!manifest_out.empty()) write_manifest(manifest, manifest_out);
    return result;
}

ExitCode exit_code_for_current_exception() {
    try {
        throw;
    } catch (const UnknownStageError&) {
        return ExitCode::unknown_stage;
    } catch (const MissingInputError&) {
        return ExitCode::missing_input;
    } catch (const SchemaError&) {
        return ExitCode::schema;
    } catch (const ValidationError&) {
        return ExitCode::validation;
    } catch (const std::invalid_argument&) {
        return ExitCode::usage;
    } catch (const std::exception&) {
        return ExitCode::error;
    } catch (...) {
        return ExitCode::error;
    }
}

}  // namespace lasiq
