#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace paralog {

/// Uniform space-time lattice on an axis-aligned box.
///
/// Axes 0..n-1 are spatial, axis n is time. Nodes along axis a sit at
/// lo[a] + i * spacing(a) for i in [0, shape[a]); the right endpoint is not
/// sampled (half-open convention, matching the periodic identification).
struct GridSpec {
    int n = 1;                    ///< spatial dimension (1 or 2)
    std::vector<int> shape;       ///< samples per axis: n spatial entries, then time
    std::vector<double> lo;       ///< lower box corner, same axis order
    std::vector<double> hi;       ///< upper box corner
    bool periodic = true;

    int rank() const { return n + 1; }
    int time_axis() const { return n; }

    double length(int axis) const { return hi[axis] - lo[axis]; }
    double spacing(int axis) const { return length(axis) / shape[axis]; }
    double coord(int axis, int i) const { return lo[axis] + i * spacing(axis); }

    std::size_t node_count() const;
    std::vector<std::size_t> strides() const;  // axis 0 fastest, time slowest

    bool same_lattice(const GridSpec& other) const;

    /// Throws std::invalid_argument on the first violated invariant.
    /// Periodic grids must have power-of-two shapes (they feed the FFT);
    /// non-periodic grids only need shape >= 4 per axis.
    void validate() const;

    static GridSpec box(int n, std::vector<int> shape, std::vector<double> lo,
                        std::vector<double> hi, bool periodic);

    /// n=1 convenience: [x_lo,x_hi) x [t_lo,t_hi).
    static GridSpec line(int nx, int nt, double x_lo, double x_hi, double t_lo,
                         double t_hi, bool periodic);
};

/// Real-valued samples on a GridSpec. Immutable by convention: operations
/// return new functions. Construction validates size and finiteness.
class GridFunction {
public:
    GridFunction(GridSpec spec, std::vector<double> values, std::string label);

    const GridSpec& spec() const { return spec_; }
    const std::string& label() const { return label_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t flat) const { return values_[flat]; }
    double at(std::span<const int> idx) const;

    double mean() const;
    double max_abs() const;

private:
    GridSpec spec_;
    std::vector<double> values_;
    std::string label_;
};

/// Parabolic gauge: the positive root of |x|^2/r^2 + t^2/r^4 = 1, in closed
/// form r^2 = (|x|^2 + sqrt(|x|^4 + 4 t^2)) / 2. Homogeneous of degree one
/// under (x,t) -> (2x, 4t).
double quasi_norm(std::span<const double> x, double t);
double quasi_norm(double x, double t);

/// Anisotropic dilation diag(2,...,2,4): doubling in space, quadrupling in
/// time. apply(x, t, j) scales by the j-th power; |j| <= 62.
struct DilationMatrix {
    int n = 1;
    void apply(std::span<double> x, double& t, int power) const;
};

struct SpaceTimePoint {
    std::vector<double> x;
    double t = 0.0;
};

/// A^j z; throws std::out_of_range for |j| > 62.
SpaceTimePoint dilate(const SpaceTimePoint& z, int j);

using Generator = std::function<double(std::span<const double> x, double t)>;

/// Evaluates the generator at every node. Throws std::runtime_error naming
/// the node if a value comes out non-finite.
GridFunction sample(const Generator& gen, const GridSpec& spec,
                    std::string label = "sampled");

/// Fourier-multiplier d/dx_axis on a periodic grid (i*xi, Nyquist bin
/// zeroed). Output has exactly zero mean. axis must be spatial.
GridFunction spectral_derivative_x(const GridFunction& g, int axis);

/// Cumulative trapezoidal integral along a spatial axis, anchored so the
/// result vanishes at the node nearest to `base` (which must lie in the
/// domain interval of that axis).
GridFunction antiderivative_x(const GridFunction& f, int axis, double base);

}  // namespace paralog
