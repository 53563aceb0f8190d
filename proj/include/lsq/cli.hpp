// Copyright 2026 The lsq Authors
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

// Command-line front end: configuration, file formats and the subcommands of
// the `lsq` tool. Everything here is callable in-process so the tool's
// behavior can be tested without spawning it.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace lsq::cli {

inline constexpr std::string_view kReportSchema = "lsq-report/1";
inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,
    kValidation = 2,
    kToleranceFailure = 3,
    kIoFailure = 4,
};

/// Fully resolved parameters of one run. Scan parameters keep their range
/// text ("0:0.3:0.05" or "1,2,4") so the embedded config reproduces the run.
struct ExperimentConfig {
    std::string subcommand;
    std::string state;      // qfi: fock|coherent|displaced-squeezed|damped|thermal|pair|sequence|ghz
    std::string kind;       // pair kind, channel type or multimode probe
    std::vector<std::string> methods;
    std::string n = "0";
    int m = 2;
    int ell = 1;
    std::string modes = "2";
    std::string d = "1";
    std::string alpha = "0";
    double alpha_imag = 0.0;
    double squeeze = 1.0;
    std::string gamma = "0";
    std::string xi = "0";
    int shots = 1000;
    int reps = 100;
    std::uint64_t seed = 0;
    std::string estimator = "mle";
    std::optional<double> prior_shape;
    std::optional<double> prior_rate;
    std::string in_path;
    std::string out_path;
    std::string report_path;
    std::optional<int> cutoff;
    std::optional<double> tolerance;
    bool verify = false;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

/// "x", "a,b,c" or "start:stop:step" (stop included within half a step).
std::vector<double> parse_range(std::string_view text);
/// As parse_range, every value must be an integer.
std::vector<int> parse_int_range(std::string_view text);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Sample CSV: header "index,q", one row per sample, %.17g values.
std::string format_samples_csv(const std::vector<double>& samples);
std::vector<double> parse_samples_csv(std::string_view text);
std::vector<double> read_samples_csv(const std::filesystem::path& path);

/// {"schema", "config", "versions", "results"}.
nlohmann::json make_report(const ExperimentConfig& config, nlohmann::json results);

/// Runs one command line (args exclude the program name) and returns the
/// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lsq::cli
