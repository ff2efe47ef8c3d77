#pragma once

#include <iosfwd>
#include <string>

#include "mbfpe/config.hpp"
#include "mbfpe/sde_sampler.hpp"
#include "mbfpe/verify.hpp"

namespace mbfpe {

/// Rows t,x,W,J,D1,D2 on cfg.points uniform x-values spanning the moving
/// domain at each requested time (17 significant digits). An unbounded end is
/// cut where the remaining mass is below 1e-12.
void write_eval_csv(std::ostream& os, const SimilaritySolution& sol, const RunConfig& cfg);

VerifyOptions verify_options(const RunConfig& cfg);

struct SampleRun {
    Histogram histogram;
    double distance = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
    std::uint64_t reflections = 0;
};

/// Draws cfg.paths particles (at least 1000 when unset) at the first time and
/// propagates them to the last one.
SampleRun run_sample(const SimilaritySolution& sol, const RunConfig& cfg, unsigned workers = 1);

/// Coefficient profiles, domain, constraints and normalization of a class.
std::string class_info(ClassKind kind);

/// One line per shipped preset.
std::string presets_listing();

}  // namespace mbfpe
