#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "paralog/grid.hpp"
#include "paralog/littlewood_paley.hpp"

namespace paralog {

/// Deterministic splitmix64 stream; identical output on every platform
/// (std:: distributions are implementation-defined, so none are used).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();  ///< [0,1)
    double uniform(double a, double b);
    int uniform_int(int lo, int hi);  ///< inclusive
    double gaussian();

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Member seed for index i of a family with the given master seed.
std::uint64_t member_seed(std::uint64_t master, std::uint64_t index);

enum class FamilyKind { trig_random, bump, lacunary, heat_noise, holder_rough };

FamilyKind family_kind_from_string(const std::string& name);
std::string to_string(FamilyKind kind);

struct FamilySpec {
    FamilyKind kind = FamilyKind::trig_random;
    int count = 50;
    std::uint64_t master_seed = 1;
    std::uint64_t index_offset = 0;  ///< first member index (disjoint holdouts)
    int modes = 6;           ///< trig_random term count
    double decay = 1.0;      ///< amplitude decay exponent in the mode number
    int lacunary_depth = 4;  ///< M
    double roughness = 0.5;  ///< target Hoelder exponent of holder_rough
};

struct FamilyMember {
    std::uint64_t seed = 0;
    GridFunction g;
    GridFunction f;  ///< f = dg/dx_1, exact for the band-limited constructions
};

/// Seeded (g, f) pairs on a periodic grid. Deterministic under the master
/// seed; every construction keeps its spectrum away from the Nyquist edge
/// and f mean-free.
std::vector<FamilyMember> generate_family(const FamilySpec& spec, const GridSpec& grid);

/// Smooth Hoelder-regular scalar samples on a (typically non-periodic)
/// Omega_T grid, for the bounded-domain experiments.
GridFunction generate_omega_function(FamilyKind kind, std::uint64_t seed,
                                     const GridSpec& grid);

/// cos^{2 power}(pi (t - t_mid) / L_t): a positive, exactly band-limited
/// time window concentrated at the box midpoint, max value 1.
double time_window(const GridSpec& spec, double t, int power);

/// Phase-aligned lacunary pair on a periodic grid:
///   f = sum_{k=1..depth} cos(2^k w0 x) * window(t),  g with dg/dx = f,
/// w0 the base_mode-th spatial frequency. All cosines align at x = 0.
/// Throws if the top mode exceeds a quarter of the spatial Nyquist.
std::pair<GridFunction, GridFunction> lacunary_pair(const GridSpec& spec, int depth,
                                                    int base_mode);

/// Spectral energy fraction at gauges >= 2^{j_max} of the bank (the top
/// octave); small values certify the function is band-limited well inside
/// the resolvable levels.
double high_gauge_energy_fraction(const GridFunction& f, const FilterBank& bank);

}  // namespace paralog
