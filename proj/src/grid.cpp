#include "paralog/grid.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "paralog/fft.hpp"

namespace paralog {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void fail(const std::string& what) { throw std::invalid_argument(what); }

}  // namespace

std::size_t GridSpec::node_count() const {
    std::size_t p = 1;
    for (int s : shape) p *= static_cast<std::size_t>(s);
    return p;
}

std::vector<std::size_t> GridSpec::strides() const {
    std::vector<std::size_t> s(rank());
    std::size_t acc = 1;
    for (int a = 0; a < rank(); ++a) {
        s[a] = acc;
        acc *= static_cast<std::size_t>(shape[a]);
    }
    return s;
}

bool GridSpec::same_lattice(const GridSpec& other) const {
    return n == other.n && shape == other.shape && lo == other.lo && hi == other.hi;
}

void GridSpec::validate() const {
    if (n != 1 && n != 2) fail("GridSpec: spatial dimension must be 1 or 2");
    if (static_cast<int>(shape.size()) != rank() ||
        static_cast<int>(lo.size()) != rank() || static_cast<int>(hi.size()) != rank())
        fail("GridSpec: shape/lo/hi must have n+1 entries");
    for (int a = 0; a < rank(); ++a) {
        if (shape[a] < 4) fail("GridSpec: shape entries must be >= 4");
        if (periodic && !power_of_two(shape[a]))
            fail("GridSpec: periodic grids need power-of-two shapes");
        if (!(hi[a] > lo[a])) fail("GridSpec: box must have hi > lo on every axis");
        if (!(spacing(a) > 0.0) || !std::isfinite(spacing(a)))
            fail("GridSpec: spacing must be strictly positive and finite");
    }
}

GridSpec GridSpec::box(int n, std::vector<int> shape, std::vector<double> lo,
                       std::vector<double> hi, bool periodic) {
    GridSpec s;
    s.n = n;
    s.shape = std::move(shape);
    s.lo = std::move(lo);
    s.hi = std::move(hi);
    s.periodic = periodic;
    s.validate();
    return s;
}

GridSpec GridSpec::line(int nx, int nt, double x_lo, double x_hi, double t_lo,
                        double t_hi, bool periodic) {
    return box(1, {nx, nt}, {x_lo, t_lo}, {x_hi, t_hi}, periodic);
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values, std::string label)
    : spec_(std::move(spec)), values_(std::move(values)), label_(std::move(label)) {
    spec_.validate();
    if (values_.size() != spec_.node_count())
        throw std::invalid_argument("GridFunction: values length does not match shape");
    double acc = 0.0;
    for (double v : values_) acc += std::fabs(v);
    if (!std::isfinite(acc))
        throw std::invalid_argument("GridFunction: non-finite value in '" + label_ + "'");
}

double GridFunction::at(std::span<const int> idx) const {
    auto st = spec_.strides();
    std::size_t flat = 0;
    for (int a = 0; a < spec_.rank(); ++a) flat += st[a] * static_cast<std::size_t>(idx[a]);
    return values_[flat];
}

double GridFunction::mean() const {
    double acc = 0.0;
    for (double v : values_) acc += v;
    return acc / static_cast<double>(values_.size());
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

double quasi_norm(std::span<const double> x, double t) {
    double x2 = 0.0;
    for (double xi : x) x2 += xi * xi;
    if (x2 == 0.0 && t == 0.0) return 0.0;
    double r2 = 0.5 * (x2 + std::sqrt(x2 * x2 + 4.0 * t * t));
    return std::sqrt(r2);
}

double quasi_norm(double x, double t) {
    std::array<double, 1> xs{x};
    return quasi_norm(std::span<const double>(xs), t);
}

void DilationMatrix::apply(std::span<double> x, double& t, int power) const {
    if (power < -62 || power > 62)
        throw std::out_of_range("DilationMatrix: |power| must be <= 62");
    for (double& xi : x) xi = std::ldexp(xi, power);
    t = std::ldexp(t, 2 * power);
}

SpaceTimePoint dilate(const SpaceTimePoint& z, int j) {
    SpaceTimePoint out = z;
    DilationMatrix A{static_cast<int>(z.x.size())};
    A.apply(out.x, out.t, j);
    return out;
}

GridFunction sample(const Generator& gen, const GridSpec& spec, std::string label) {
    spec.validate();
    std::vector<double> values(spec.node_count());
    std::vector<int> idx(spec.rank(), 0);
    std::vector<double> x(spec.n);
    std::size_t flat = 0;
    for (;;) {
        for (int a = 0; a < spec.n; ++a) x[a] = spec.coord(a, idx[a]);
        double t = spec.coord(spec.time_axis(), idx[spec.time_axis()]);
        double v = gen(x, t);
        if (!std::isfinite(v)) {
            std::string where;
            for (int a = 0; a < spec.rank(); ++a)
                where += (a ? "," : "") + std::to_string(idx[a]);
            throw std::runtime_error("sample: non-finite value at node (" + where + ")");
        }
        values[flat++] = v;
        int a = 0;
        while (a < spec.rank() && ++idx[a] == spec.shape[a]) idx[a++] = 0;
        if (a == spec.rank()) break;
    }
    return GridFunction(spec, std::move(values), std::move(label));
}

GridFunction spectral_derivative_x(const GridFunction& g, int axis) {
    const GridSpec& spec = g.spec();
    if (!spec.periodic)
        throw std::invalid_argument("spectral_derivative_x: periodic grid required");
    if (axis < 0 || axis >= spec.n)
        throw std::invalid_argument("spectral_derivative_x: axis must be spatial");

    auto data = fft_of(g);
    fft_forward(data, spec.shape);

    const double two_pi_over_l = 2.0 * M_PI / spec.length(axis);
    const int na = spec.shape[axis];
    auto st = spec.strides();
    const std::size_t total = data.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
        int ia = static_cast<int>((flat / st[axis]) % static_cast<std::size_t>(na));
        int k = ia <= na / 2 ? ia : ia - na;
        double xi = (ia == na / 2) ? 0.0 : two_pi_over_l * k;  // zero the Nyquist bin
        data[flat] *= std::complex<double>(0.0, xi);
    }
    fft_inverse(data, spec.shape);
    return real_part(spec, data, "d/dx" + std::to_string(axis) + " " + g.label(),
                     g.max_abs());
}

GridFunction antiderivative_x(const GridFunction& f, int axis, double base) {
    const GridSpec& spec = f.spec();
    if (axis < 0 || axis >= spec.n)
        throw std::invalid_argument("antiderivative_x: axis must be spatial");
    if (base < spec.lo[axis] || base > spec.hi[axis])
        throw std::invalid_argument("antiderivative_x: base outside domain");

    const double h = spec.spacing(axis);
    const int na = spec.shape[axis];
    int ib = static_cast<int>(std::lround((base - spec.lo[axis]) / h));
    ib = std::min(std::max(ib, 0), na - 1);

    auto st = spec.strides();
    const std::size_t stride = st[axis];
    std::vector<double> out(f.size());
    const auto vals = f.values();

    // For each line along the axis, integrate outward from the base node.
    const std::size_t total = f.size();
    for (std::size_t start = 0; start < total; ++start) {
        if ((start / stride) % static_cast<std::size_t>(na) != 0) continue;
        std::size_t b = start + stride * static_cast<std::size_t>(ib);
        out[b] = 0.0;
        for (int i = ib + 1; i < na; ++i) {
            std::size_t p = start + stride * static_cast<std::size_t>(i);
            out[p] = out[p - stride] + 0.5 * h * (vals[p - stride] + vals[p]);
        }
        for (int i = ib - 1; i >= 0; --i) {
            std::size_t p = start + stride * static_cast<std::size_t>(i);
            out[p] = out[p + stride] - 0.5 * h * (vals[p] + vals[p + stride]);
        }
    }
    return GridFunction(spec, std::move(out), "antiderivative " + f.label());
}

}  // namespace paralog
