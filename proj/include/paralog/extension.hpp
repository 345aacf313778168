#pragma once

#include <span>

#include "paralog/grid.hpp"
#include "paralog/norms.hpp"

namespace paralog {

/// Geometry of the symmetric-extension construction on the unit spatial box:
/// Omega_T = (0,1)^n x (0,T) sits inside the tripled box
/// Omega~_T = (-1,2)^n x (-T,2T), with nested cutoff zones
///   Z1 = (-1/4, 5/4)^n x (-T/4, 5T/4),
///   Z2 = (-3/4, 7/4)^n x (-3T/4, 7T/4).
struct ExtensionLayout {
    int n = 1;
    double T = 1.0;
    Region omega, omega_tilde, z1, z2;

    static ExtensionLayout make(double T, int n = 1);
};

/// Even-reflection fold of a tripled-grid index onto the base grid,
/// a in [0, 3*n_base). Indices 0 and 2*n_base sit on the unsampled closure
/// lines (x = 1 resp. t = T mirrors) and clamp to the nearest node.
int fold_index(int a, int n_base);

/// Node-level preimage: tripled-grid multi-index -> base-grid multi-index.
std::vector<int> reflect_preimage_node(std::span<const int> idx,
                                       const GridSpec& omega_spec);

/// Symmetric extension f~ on the tripled grid: identity on Omega_T, even
/// reflection across x = 0, x = 1, then across t = 0, t = T. Pure index
/// permutation; the input grid must be the Omega_T lattice of the layout.
GridFunction reflect(const GridFunction& f, const ExtensionLayout& layout);

/// Continuum preimage (x-bar, t-bar) in the closure of Omega_T; z must lie
/// in the closure of Omega~_T.
SpaceTimePoint reflect_preimage(const SpaceTimePoint& z, const ExtensionLayout& layout);

struct CutoffPsi {
    ExtensionLayout layout;
    GridFunction values;
};

/// Tensor product of 1-D plateau bumps: exactly 1 on Z1, exactly 0 outside
/// Z2, smooth-step transition in between. The grid must contain Z2 and
/// resolve the transition bands.
CutoffPsi build_psi(const ExtensionLayout& layout, const GridSpec& grid);

/// Periodic box holding the extension with margin: [-1.5, 2.5)^n spatially,
/// [-1.5T, 2.5T) in time, 4x the Omega_T node counts.
GridSpec default_extension_target(const ExtensionLayout& layout,
                                  const GridSpec& omega_spec);

struct ExtensionResult {
    GridFunction extended;  ///< Psi * f~ on the target box, zero outside Z2
    GridFunction psi;       ///< the cutoff sampled on the target grid
    ExtensionLayout layout;
};

/// Psi * f~, zero-padded onto an aligned target box.
ExtensionResult extend(const GridFunction& f, const ExtensionLayout& layout,
                       const GridSpec& target);

struct TransferReport {
    double norm_in = 0.0;   ///< Hoelder norm of f on Omega_T
    double norm_out = 0.0;  ///< Hoelder norm of Psi f~ on the target box
    double ratio = 1.0;     ///< norm_out / norm_in (1 when both vanish)
    double psi_semi_x = 0.0;
    double psi_semi_t = 0.0;
};

/// Empirical constant of the extension's Hoelder-norm transfer.
TransferReport holder_transfer_check(const GridFunction& f, double gamma,
                                     const ExtensionLayout& layout);

}  // namespace paralog
