#pragma once

#include <optional>
#include <vector>

#include "paralog/grid.hpp"

namespace paralog {

/// Axis-aligned sub-box, same axis order as GridSpec. Node membership uses
/// closed intervals.
struct Region {
    std::vector<double> lo, hi;
};

/// max |f| over nodes in the region (default: whole grid).
double sup_norm(const GridFunction& f, const std::optional<Region>& region = {});

struct SeminormResult {
    double value = 0.0;
    std::size_t node_a = 0;  ///< flat indices of a pair achieving the sup
    std::size_t node_b = 0;
};

/// sup over same-time node pairs of |f(x,t)-f(x',t)| / |x-x'|^gamma.
///
/// Grids with at most 64 spatial nodes per axis (32 for n=2) are scanned
/// exhaustively; larger grids use every pair at separations 1..3 nodes plus
/// an all-pairs scan of a strided sublattice (<= 48 sites per axis), which
/// tracks the sup of Hoelder-regular functions to grid accuracy.
SeminormResult holder_seminorm_x_info(const GridFunction& f, double gamma);
double holder_seminorm_x(const GridFunction& f, double gamma);

/// Time mirror with exponent gamma/2 on |t-t'|.
SeminormResult holder_seminorm_t_info(const GridFunction& f, double gamma);
double holder_seminorm_t(const GridFunction& f, double gamma);

struct HolderReport {
    double gamma = 0.0;
    double sup_norm = 0.0;
    double semi_x = 0.0;
    double semi_t = 0.0;
    double total = 0.0;  ///< sup_norm + semi_x + semi_t
};

HolderReport holder_norm(const GridFunction& f, double gamma);

struct BmoReport {
    double value = 0.0;
    std::vector<double> center;  ///< worst cylinder center (x..., t)
    double radius = 0.0;
    long cylinders_scanned = 0;
    int stride_x = 1;  ///< largest center stride used in space
    int stride_t = 1;  ///< largest center stride used in time
};

/// Parabolic mean-oscillation norm: sup over cylinders
/// Q_r(x0,t0) = {|x-x0| < r} x (t0 - r^2, t0 + r^2) of the mean absolute
/// deviation of f from its mean over Q intersected with the domain.
///
/// Radii run the dyadic ladder 2h_x, 4h_x, ... up to the domain width, with
/// centers on every node (grids <= 32 per axis) or on a per-radius stride of
/// half the cylinder half-width, recorded in the report.
BmoReport bmo_norm(const GridFunction& f, const std::optional<Region>& region = {});

/// Riemann-sum L^p norm, p in {1,2}, cell weight h_x^n * h_t.
double lp_norm(const GridFunction& f, int p, const std::optional<Region>& region = {});

/// log(e + s); >= 1, monotone. s must be nonnegative.
double log_plus(double s);

}  // namespace paralog
