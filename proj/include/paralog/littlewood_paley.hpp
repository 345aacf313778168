#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "paralog/grid.hpp"

namespace paralog {

/// C^infty step: 0 for u <= 0, 1 for u >= 1, strictly increasing between.
double smooth_step(double u);

/// Radial cutoff profile in the parabolic gauge: exactly 1 for rho <= 1,
/// exactly 0 for rho >= 2, smooth in between.
double theta_profile(double rho);

enum class BankMode { homogeneous, inhomogeneous };

/// Frequency-side multiplier stored sparsely over the lattice (flat indices
/// ascending). Entries outside the support are identically zero.
struct SparseMultiplier {
    std::vector<std::uint32_t> idx;
    std::vector<double> val;

    double value_at(std::uint32_t flat) const;
    bool empty() const { return idx.empty(); }
};

/// Anisotropic dyadic filter bank on the frequency lattice of a periodic
/// grid. Level j carries m_j(xi) = theta(A^{-(j+1)} xi) - theta(A^{-j} xi),
/// supported in 1 <= rho(A^{-j} xi) <= 4; the sum over levels telescopes, so
/// the partition of unity is exact up to floating-point noise.
///
/// Inhomogeneous banks additionally carry the theta low-pass (the special
/// level 0 of the Besov scale) together with homogeneous levels 0..j_max, so
/// that low_pass + sum of levels reproduces every lattice mode exactly.
class FilterBank {
public:
    static FilterBank build(const GridSpec& spec, BankMode mode);

    const GridSpec& spec() const { return spec_; }
    BankMode mode() const { return mode_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    bool has_low_pass() const { return mode_ == BankMode::inhomogeneous; }

    const SparseMultiplier& level(int j) const;
    const SparseMultiplier& low_pass() const;

    /// Parabolic gauge of every lattice frequency, flat-index order.
    const std::vector<double>& gauges() const { return rho_; }
    double rho_min_nonzero() const { return rho_min_; }
    double rho_max() const { return rho_max_; }

private:
    GridSpec spec_;
    BankMode mode_ = BankMode::inhomogeneous;
    int j_min_ = 0, j_max_ = 0;
    SparseMultiplier theta_;
    std::vector<SparseMultiplier> levels_;
    std::vector<double> rho_;
    double rho_min_ = 0.0, rho_max_ = 0.0;
};

struct PartitionReport {
    double max_residual_covered = 0.0;  ///< max |sum - 1| where coverage is claimed
    double max_residual_outside = 0.0;  ///< worst deviation elsewhere (boundary levels)
    double rho_covered_lo = 0.0, rho_covered_hi = 0.0;
};

PartitionReport partition_residual(const FilterBank& bank);

struct Block {
    int level = 0;        ///< homogeneous index; 0 with low_pass=true is theta
    bool low_pass = false;
    GridFunction values;
    double sup = 0.0;
};

struct BlockDecomposition {
    BankMode mode = BankMode::inhomogeneous;
    std::vector<Block> blocks;
};

/// One forward transform, one inverse per stored level.
BlockDecomposition decompose(const GridFunction& f, const FilterBank& bank);

/// Single homogeneous block phi_j * f (frequency-side multiplication).
GridFunction lp_block(const GridFunction& f, const FilterBank& bank, int j);

/// Theta block of an inhomogeneous bank.
GridFunction lp_low_pass_block(const GridFunction& f, const FilterBank& bank);

/// Sum of blocks. Homogeneous decompositions reproduce f minus its mean
/// (the unrecoverable "modulo polynomials" part); inhomogeneous ones
/// reproduce f itself.
GridFunction reconstruct(const BlockDecomposition& decomp);

struct BesovResult {
    double value = 0.0;
    int argmax_level = 0;  ///< 0 denotes the theta block
};

/// Inhomogeneous Besov quasi-norm: max of the theta-block sup and
/// 2^{gamma j} sup|phi_j * f| over j >= 1.
BesovResult besov_norm(const GridFunction& f, const FilterBank& bank, double gamma);

/// Same, reusing an already-computed inhomogeneous decomposition.
BesovResult besov_from_blocks(const BlockDecomposition& decomp, double gamma);

/// Per-level sup norms of a decomposition (enough to evaluate Besov norms
/// at any gamma without keeping the blocks alive).
struct LevelSup {
    int level = 0;
    bool low_pass = false;
    double sup = 0.0;
};

std::vector<LevelSup> level_sups(const BlockDecomposition& decomp);
BesovResult besov_from_sups(std::span<const LevelSup> sups, double gamma);

/// Pointwise (sum_{j in levels} 2^{2 w j} |phi_j * f|^2)^{1/2}.
GridFunction square_function(const GridFunction& f, const FilterBank& bank,
                             std::span<const int> levels, double weight_exponent);

}  // namespace paralog
