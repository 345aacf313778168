#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "paralog/extension.hpp"
#include "paralog/grid.hpp"
#include "paralog/littlewood_paley.hpp"
#include "paralog/norms.hpp"

namespace paralog {

/// C_gamma = (1 / (2^{2 gamma} - 1))^{1/2},
/// C'_gamma = 2^{-gamma} / (1 - 2^{-gamma}); gamma strictly inside (0,1).
std::pair<double, double> paper_constants(double gamma);

/// One truncation level of the three-way low/mid/high frequency split:
///   bound = C_g 2^{-gN} A1 + (2N+1)^{1/2} A2 + C'_g 2^{-gN} A3
/// with A1/A2 square-function sups and A3 the weighted high-level sup.
/// For mean-zero f the sup norm never exceeds the bound (triangle plus
/// Cauchy-Schwarz on complete lattice level sums).
struct SplitEstimate {
    int n_level = 0;  ///< N
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double c_gamma = 0.0, c_gamma_prime = 0.0;
    double bound = 0.0;
    double lhs = 0.0;  ///< sup |f|
    int a1_levels = 0, a2_levels = 0, a3_levels = 0;  ///< resolvable levels used
    double mean_residual = 0.0;  ///< |mean f|; the split certifies f minus its mean
    double ratio_a1_gsup = 0.0;    ///< A1 / sup|g|           (finite when g != 0)
    double ratio_a2_bmo = 0.0;     ///< A2 / BMO(f)
    double ratio_a3_holder = 0.0;  ///< A3 / Hoelder norm of f

    bool holds(double tol = 1e-9) const {
        return lhs <= bound + tol * (lhs > 1.0 ? lhs : 1.0);
    }
};

/// Reference norms entering the split diagnostics.
struct SplitNorms {
    double f_bmo = 0.0;
    double f_holder = 0.0;
};

/// Homogeneous block data for one (f, g) pair, computed once and queried per
/// (gamma, N).
class SplitContext {
public:
    SplitContext(const GridFunction& f, const GridFunction& g, const FilterBank& bank);

    double f_sup() const { return f_sup_; }
    double g_sup() const { return g_sup_; }
    double mean_residual() const { return mean_residual_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    double level_sup(int j) const;

    SplitEstimate estimate(double gamma, int n, const SplitNorms& norms) const;

    /// Full bound-vs-N table; one pointwise pass per call.
    std::vector<SplitEstimate> table(double gamma, std::span<const int> n_range,
                                     const SplitNorms& norms) const;

private:
    int j_min_ = 0, j_max_ = 0;
    std::size_t total_ = 0;
    double f_sup_ = 0.0, g_sup_ = 0.0, mean_residual_ = 0.0;
    std::vector<std::vector<double>> block_values_;
    std::vector<double> block_sups_;
};

/// Convenience wrappers computing the reference norms themselves.
SplitEstimate split_bound(const GridFunction& f, const GridFunction& g,
                          const FilterBank& bank, double gamma, int n);

struct OptimizeResult {
    int n_star = 0;
    SplitEstimate best;
    std::vector<SplitEstimate> table;
};

/// Minimizes the bound over the N range; ties break toward smaller N.
OptimizeResult optimize_N(const GridFunction& f, const GridFunction& g,
                          const FilterBank& bank, double gamma,
                          std::span<const int> n_range);

struct VerificationReport {
    int theorem = 1;
    double lhs = 0.0;
    double bmo = 0.0, holder = 0.0, g_sup = 0.0, l1 = 0.0;
    double rhs_factor = 1.0;  ///< 1 + (norm combination) * sqrt(log_plus(...))
    double implied_c = 0.0;   ///< lhs / rhs_factor
    double gamma = 0.0, T = 0.0;
    std::string grid;
    std::uint64_t seed = 0;
    int n_star = 0;
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double besov = 0.0;
    int besov_level = 0;
    // bounded-domain chain diagnostics (theorem 2 only)
    double claim_h_ratio = 0.0;
    double bmo_transfer_ratio = 0.0;
    double g_sup_ratio = 0.0;
    double extension_sup = 0.0;
    double mean_removed = 0.0;
};

/// Gamma-independent part of a scalar-route verification: blocks of f on
/// both banks plus BMO, computed once; report() adds the gamma-dependent
/// norms and split table. f must be the x_1-derivative of g.
class Theorem1Analysis {
public:
    Theorem1Analysis(GridFunction g, GridFunction f, const FilterBank& hom_bank,
                     const FilterBank& inh_bank);

    VerificationReport report(double gamma, std::span<const int> n_range,
                              std::vector<SplitEstimate>* table_out = nullptr) const;

    const GridFunction& f() const { return f_; }
    const GridFunction& g() const { return g_; }
    double bmo() const { return bmo_; }

private:
    GridFunction g_, f_;
    SplitContext ctx_;
    std::vector<LevelSup> inh_sups_;
    double bmo_ = 0.0, l1_ = 0.0;
};

/// Scalar-route verification on the periodic box: f = d g / d x_1,
/// rhs_factor = 1 + BMO(f) * sqrt(log_plus(Hoelder(f) + sup|g|)).
VerificationReport verify_theorem1(const GridFunction& g, const FilterBank& hom_bank,
                                   const FilterBank& inh_bank, double gamma,
                                   std::span<const int> n_range);

/// Gamma-independent part of a bounded-domain verification: the extension,
/// its antiderivative, BMO on both grids and the big-box blocks.
class Theorem2Analysis {
public:
    Theorem2Analysis(GridFunction f, const ExtensionLayout& layout,
                     const FilterBank& big_hom_bank, const FilterBank& big_inh_bank);

    VerificationReport report(double gamma, std::span<const int> n_range,
                              std::vector<SplitEstimate>* table_out = nullptr) const;

    const GridFunction& f() const { return f_; }
    const GridFunction& extended() const { return big_; }

private:
    GridFunction f_;
    ExtensionLayout layout_;
    GridFunction big_, big0_, g_chain_;
    SplitContext ctx_;
    std::vector<LevelSup> inh_sups_;
    double bmo_in_ = 0.0, bmo_out_ = 0.0, l1_ = 0.0;
    double mean_removed_ = 0.0, extension_sup_ = 0.0;
};

/// Bounded-domain verification: f lives on the Omega_T grid,
/// rhs_factor = 1 + (BMO + L1)(f) * sqrt(log_plus(Hoelder(f))); also runs the
/// internal chain (extension, antiderivative, split machinery on the box)
/// and records every intermediate constant.
VerificationReport verify_theorem2(const GridFunction& f, double gamma,
                                   const ExtensionLayout& layout,
                                   const FilterBank& big_hom_bank,
                                   const FilterBank& big_inh_bank,
                                   std::span<const int> n_range);

struct SharpnessRow {
    int m = 0;
    double linf = 0.0;
    double bmo = 0.0;
    double holder = 0.0;
    double ratio = 0.0;  ///< linf / (bmo * sqrt(log_plus(holder)))
};

/// Lacunary-family probe of the square-root-log growth order.
std::vector<SharpnessRow> sharpness_probe(std::span<const int> m_range,
                                          const FilterBank& bank, double gamma);

}  // namespace paralog
