#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "paralog/experiment.hpp"

namespace paralog {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

/// Runs the full acceptance battery (partition of unity, reconstruction,
/// norm oracles, split-bound validity, displayed constants, component
/// estimates, extension correctness, theorem stability, sharpness probe,
/// end-to-end timing). Prints one pass/fail line per criterion to `log` and
/// returns all ten results; the last entry aggregates time and overall
/// status.
std::vector<CriterionResult> run_acceptance(const ExperimentConfig& config,
                                            std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

// Independent brute-force oracles, exposed for the unit suites.
namespace oracle {

/// Exhaustive pairwise Hoelder seminorm along space (exponent gamma) or
/// time (exponent gamma/2).
double holder_x(const GridFunction& f, double gamma);
double holder_t(const GridFunction& f, double gamma);

/// Exhaustive dyadic-cylinder parabolic mean-oscillation sup.
double bmo(const GridFunction& f);

}  // namespace oracle

}  // namespace paralog
