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

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace lasiq {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes shared by the CLI and the pipeline runner. Each
/// failure class gets its own code so callers can script against them.
enum class ExitCode : int {
    ok = 0,
    error = 1,          // any other runtime failure
    usage = 2,          // bad parameters / flags
    missing_input = 3,  // referenced file does not exist
    schema = 4,         // parse error or schema mismatch
    validation = 5,     // invariant violation in otherwise well-formed data
    unknown_stage = 6,
};

class UnknownStageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Record of one result-producing invocation: the exact command, digests of
/// every input read, the seed, tool version and the artifacts written.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> inputs;  // path -> sha256
    std::uint64_t seed = 0;
    std::string version = kVersion;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const;
};

/// Execution context threaded through stage runners; collects the input
/// digests and output paths that go into the manifest.
struct StageContext {
    std::uint64_t seed = 0;
    int threads = 1;
    bool quiet = false;
    std::map<std::string, std::string> inputs;
    std::vector<std::string> outputs;

    /// Digests the file and records it; throws MissingInputError if absent.
    void note_input(const std::string& path);
    void note_output(const std::string& path);
};

/// Known stages: lattice, fit, collisions, yield, plan, anneal, gate-error,
/// zz. Parameters are the JSON form of the corresponding CLI flags.
/// Stage runners read every input before writing any output.
void run_stage(const std::string& stage, const nlohmann::json& params, StageContext& ctx);

struct PipelineResult {
    ExitCode exit_code = ExitCode::ok;
    std::vector<std::string> artifacts;
    std::string failed_stage;  // empty on success
    std::string message;       // failure detail
};

/// Pipeline config schema:
///   {"seed": int, "stages": [{"stage": name, ...params}, ...]}
/// Stages run in listed order; each stage's RNG stream is derived from
/// (seed, stage name, stage index). A failure aborts the run, and the
/// manifest written next to the config output covers the stages that
/// completed (a partial manifest).
PipelineResult run_pipeline(const std::string& config_path, std::uint64_t seed,
                            bool seed_overridden, int threads, bool quiet,
                            const std::string& manifest_out);

/// Maps the in-flight exception to the exit code table above. Call from a
/// catch(...) block.
ExitCode exit_code_for_current_exception();

void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace lasiq
