#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "piezobeam/config.hpp"

namespace piezobeam {

enum ExitCode : int { ExitSuccess = 0, ExitConfigError = 2, ExitNumericalFailure = 3, ExitScenarioFailure = 4 };

/// Everything a command produces, held in memory so that runs can be
/// compared byte for byte before anything touches the disk.
struct ResultBundle {
    std::string command;
    std::map<std::string, std::string> files;  ///< file name -> content
    nlohmann::json report;                     ///< also stored as report.json
    int exit_code = ExitSuccess;
};

/// Zero initial data, voltages from the config. Writes trajectory.csv
/// (t, per-field probe and max-abs values, energies, work, balance
/// residual) and energy.csv (the energy columns only).
ResultBundle cmd_simulate(const RunConfig& config);

/// Lowest n_modes modes with frequencies and energy-fraction classification.
ResultBundle cmd_modes(const RunConfig& config, int n_modes);

/// Structural checks matching the variant; exit code 4 if any fails.
ResultBundle cmd_check(const RunConfig& config);

/// Electrostatic-limit sweep over `mu` (positive, strictly decreasing).
ResultBundle cmd_limit(const RunConfig& config, const std::vector<double>& mu);

/// Creates `directory` and writes every file of the bundle into it.
void write_bundle(const ResultBundle& bundle, const std::filesystem::path& directory);

/// FNV-1a hash of the canonical config text, as 16 hex digits. Threads,
/// output directory and the SVG switch do not enter the hash.
std::string config_hash(const RunConfig& config);

std::string code_version();

}  // namespace piezobeam
