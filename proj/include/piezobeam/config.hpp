#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "piezobeam/errors.hpp"
#include "piezobeam/model.hpp"
#include "piezobeam/scenarios.hpp"
#include "piezobeam/time_integration.hpp"

namespace piezobeam {

/// One run, as described by an INI-style config file (grammar in README).
struct RunConfig {
    ModelSpec model;
    int elements = 32;
    std::optional<double> dt;     ///< unset: stability heuristic
    std::optional<double> t_end;  ///< unset: four stretching-wave transits
    Integrator integrator = Integrator::Midpoint;
    double newmark_beta = 0.25;
    double newmark_gamma = 0.5;
    bool reduced_shear = true;
    int threads = 1;
    std::string output_directory = "out";
    int stride = 1;
    bool svg = false;
    /// Test hook: corrupts the bottom patch's coupling sign.
    bool flip_bottom_coupling = false;

    bool operator==(const RunConfig&) const = default;

    ValidatedModelSpec validated() const;
    double time_step() const;
    double end_time() const;
    RunSettings run_settings() const;
};

struct ConfigIssue {
    ErrorCode code;
    int line = 0;    ///< 1-based; 0 when the problem concerns the file as a whole
    int column = 0;  ///< 1-based; 0 with line 0
    std::string message;
};

/// Every problem found while parsing; code() is the code of the first one.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);

    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// Throws ConfigError (ParseError, UnknownKey or UnitViolation).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Half the smallest element's transit time for the fastest mechanical wave
/// (stretching, and the highest resolvable E-B bending wave). The magnetic
/// charge waves are not resolved; the midpoint rule is stable regardless.
double heuristic_time_step(const ValidatedModelSpec& spec, int elements);

/// Four transits of the beam by the slowest material's stretching wave.
double heuristic_end_time(const ValidatedModelSpec& spec);

}  // namespace piezobeam
