#pragma once

#include <optional>
#include <string>

#include "nanotrap/trap_analysis.hpp"
#include "nanotrap/trap_config.hpp"

namespace nanotrap::run_config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScanDirective {
    trap_analysis::ScanAxis axis = trap_analysis::ScanAxis::radial;
    double r_m = 0.0;
    double phi_rad = 0.0;
    double z_m = 0.0;
    double lo = 0.0;   // meters or radians depending on the axis
    double hi = 0.0;
    int n_points = 0;
};

/// Declarative run description: trap + optional analysis directives.
/// Parsing is strict: unknown keys are rejected everywhere, and numeric keys
/// carry unit suffixes that are validated against the schema.
struct RunConfig {
    trap::TrapConfiguration trap;
    std::optional<std::string> atom_data;   // override of the bundled file
    std::optional<ScanDirective> scan;
    std::optional<std::string> output;

    static RunConfig load(const std::string& path);
    static RunConfig parse(const std::string& json_text);
    std::string serialize() const;  // lossless re-emission of the parsed config
};

}  // namespace nanotrap::run_config
