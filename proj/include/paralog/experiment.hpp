#pragma once

#include <string>
#include <vector>

#include "paralog/family.hpp"
#include "paralog/inequality.hpp"
#include "paralog/parallel.hpp"

namespace paralog {

/// One experiment run is fully determined by the config (plus the master
/// seed inside the family spec): identical configs give byte-identical CSV
/// and JSON payloads.
struct ExperimentConfig {
    double gamma = 0.5;
    std::vector<double> gammas = {0.3, 0.5, 0.7};  ///< stability sweeps

    int n = 1;
    int nx = 512, nt = 512;
    double x_lo = -4.0, x_hi = 4.0;
    double t_lo = -16.0, t_hi = 16.0;

    double T = 1.0;
    int omega_nx = 128, omega_nt = 128;

    FamilySpec family;
    int n_max = 8;  ///< split N range is {0, ..., n_max}
    std::string out_dir = "out";

    /// Throws std::invalid_argument naming the offending key.
    void validate() const;

    GridSpec grid() const;        ///< periodic full-space box
    GridSpec omega_grid() const;  ///< Omega_T box (non-periodic)
    std::vector<int> n_range() const;
};

struct FamilyRun {
    std::vector<VerificationReport> rows;  ///< seed order
    double implied_c_max = 0.0;
    double besov_holder_min = 0.0;  ///< bracket of besov/holder ratios
    double besov_holder_max = 0.0;
    double worst_split_slack = 0.0;  ///< min over rows/N of (bound - lhs)
    bool split_holds = true;         ///< lhs <= bound at every N for every member
    double max_band_fraction = 0.0;  ///< worst top-octave energy fraction
};

/// Theorem 1 scalar-route family verification on the periodic box; one row
/// per (member, gamma), blocks and BMO shared across gammas.
FamilyRun run_theorem1_family(const ExperimentConfig& config,
                              const std::vector<double>& gammas,
                              std::uint64_t seed_offset = 0);

/// Core variant over pre-generated members and pre-built banks.
FamilyRun run_theorem1_family(const ExperimentConfig& config,
                              const std::vector<double>& gammas,
                              const std::vector<FamilyMember>& members,
                              const FilterBank& hom, const FilterBank& inh);

/// Theorem 2 family on Omega_T; big-box machinery at 4x the Omega grid.
FamilyRun run_theorem2_family(const ExperimentConfig& config,
                              const std::vector<double>& gammas,
                              std::uint64_t seed_offset = 0);

std::string csv_header();
std::string csv_line(const VerificationReport& r);
std::string jsonl_line(const VerificationReport& r);

void write_csv(const std::string& path, const std::vector<VerificationReport>& rows);
void write_jsonl(const std::string& path, const std::vector<VerificationReport>& rows);

}  // namespace paralog
