#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mbfpe/solutions.hpp"

namespace mbfpe {

/// One run section of a config file.
///
///     # comment
///     [fig1]
///     class = I
///     alpha = 2
///     z1 = 1
///     z2 = 4
///     a1 = 1
///     a2 = 0.5
///     times = 0.3, 0.4, 0.5
struct RunConfig {
    std::string name = "run";
    ClassKind kind = ClassKind::I;
    bool mirrored = false;
    double alpha = 1.0;
    std::optional<double> z1;
    std::optional<double> z2;
    std::optional<double> a1;
    std::optional<double> a2;
    std::optional<double> beta;
    std::vector<double> times;
    std::string output;

    std::size_t points = 201;  ///< x-grid points per curve in eval
    std::size_t cells = 400;   ///< PDE cells
    std::size_t paths = 0;     ///< SDE particles; 0 skips the path check in verify
    std::size_t bins = 60;
    std::size_t steps = 200;   ///< SDE steps across the time span
    std::uint64_t seed = 1;
    double log_time_span = 10.0;
    double ds = 0.01;

    double norm_tol = 1e-8;
    double identity_tol = 1e-10;
    double pde_l1_tol = 1e-3;
    double sde_l1_tol = 0.05;

    bool operator==(const RunConfig&) const = default;
};

/// Parses every section; errors carry "source:line: message".
std::vector<RunConfig> parse_config(std::string_view text, const std::string& source = "<config>");

std::vector<RunConfig> load_config_file(const std::string& path);

/// Writes a config that parses back to an equal RunConfig.
std::string format_config(const RunConfig& cfg);

SolutionClass to_solution_class(const RunConfig& cfg);

RunConfig config_from_preset(const FigurePreset& preset);

}  // namespace mbfpe
