#include "paralog/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace paralog {

namespace {

struct IndexBox {
    std::vector<int> lo, hi;  // inclusive index ranges per axis
    bool empty = false;
};

// Nodes with lo <= coord <= hi per axis (closed region test).
IndexBox index_box(const GridSpec& spec, const std::optional<Region>& region) {
    IndexBox box;
    box.lo.assign(spec.rank(), 0);
    box.hi.resize(spec.rank());
    for (int a = 0; a < spec.rank(); ++a) box.hi[a] = spec.shape[a] - 1;
    if (!region) return box;
    if (static_cast<int>(region->lo.size()) != spec.rank() ||
        static_cast<int>(region->hi.size()) != spec.rank())
        throw std::invalid_argument("region: endpoint count does not match grid rank");
    for (int a = 0; a < spec.rank(); ++a) {
        int i = box.lo[a];
        while (i <= box.hi[a] && spec.coord(a, i) < region->lo[a]) ++i;
        int j = box.hi[a];
        while (j >= i && spec.coord(a, j) > region->hi[a]) --j;
        box.lo[a] = i;
        box.hi[a] = j;
        if (i > j) box.empty = true;
    }
    return box;
}

void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must lie in (0,1)");
}

// Separation -> pow(separation * h, exponent), cached per node distance.
class PowTable {
public:
    PowTable(double h, double exponent, int max_sep)
        : h_(h), e_(exponent), cache_(static_cast<std::size_t>(max_sep) + 1, -1.0) {}
    double operator()(int sep) {
        double& v = cache_[static_cast<std::size_t>(sep)];
        if (v < 0.0) v = std::pow(sep * h_, e_);
        return v;
    }

private:
    double h_, e_;
    std::vector<double> cache_;
};

std::vector<int> strided_sites(int n, int max_sites) {
    int stride = (n + max_sites - 1) / max_sites;
    std::vector<int> sites;
    for (int i = 0; i < n; i += stride) sites.push_back(i);
    return sites;
}

// Scans pairs along one axis (all other indices fixed), distances measured
// as node separation along that axis. Tracks the max difference per
// separation, then divides once; FP division by a positive constant is
// monotone, so this matches per-pair quotients bitwise.
SeminormResult axis_pair_scan(const GridFunction& f, int axis, double exponent,
                              bool exhaustive) {
    const GridSpec& spec = f.spec();
    const int n_axis = spec.shape[axis];
    const std::size_t stride = spec.strides()[axis];
    const auto vals = f.values();
    const std::size_t total = f.size();
    const std::size_t line_span = stride * static_cast<std::size_t>(n_axis);
    const std::size_t n_high = total / line_span;

    std::vector<double> max_diff(static_cast<std::size_t>(n_axis), -1.0);
    std::vector<std::size_t> arg(static_cast<std::size_t>(n_axis), 0);
    auto consider = [&](std::size_t p, int d) {
        double diff = std::fabs(vals[p + stride * static_cast<std::size_t>(d)] - vals[p]);
        if (diff > max_diff[static_cast<std::size_t>(d)]) {
            max_diff[static_cast<std::size_t>(d)] = diff;
            arg[static_cast<std::size_t>(d)] = p;
        }
    };

    auto sites = strided_sites(n_axis, 48);
    for (std::size_t high = 0; high < n_high; ++high)
        for (std::size_t low = 0; low < stride; ++low) {
            const std::size_t base = high * line_span + low;
            if (exhaustive) {
                for (int d = 1; d < n_axis; ++d)
                    for (int ia = 0; ia + d < n_axis; ++ia)
                        consider(base + stride * static_cast<std::size_t>(ia), d);
            } else {
                for (int d = 1; d <= std::min(3, n_axis - 1); ++d)
                    for (int ia = 0; ia + d < n_axis; ++ia)
                        consider(base + stride * static_cast<std::size_t>(ia), d);
                for (std::size_t ai = 0; ai < sites.size(); ++ai)
                    for (std::size_t bi = ai + 1; bi < sites.size(); ++bi) {
                        int d = sites[bi] - sites[ai];
                        if (d <= 3) continue;  // already covered above
                        consider(base + stride * static_cast<std::size_t>(sites[ai]), d);
                    }
            }
        }

    SeminormResult best;
    PowTable pd(spec.spacing(axis), exponent, n_axis);
    for (int d = 1; d < n_axis; ++d) {
        if (max_diff[static_cast<std::size_t>(d)] < 0.0) continue;
        double q = max_diff[static_cast<std::size_t>(d)] / pd(d);
        if (q > best.value) {
            best.value = q;
            best.node_a = arg[static_cast<std::size_t>(d)];
            best.node_b = arg[static_cast<std::size_t>(d)] +
                          stride * static_cast<std::size_t>(d);
        }
    }
    return best;
}

// All same-time spatial pairs for n=2, Euclidean distances.
SeminormResult planar_pair_scan(const GridFunction& f, double gamma, bool exhaustive) {
    const GridSpec& spec = f.spec();
    const int nx = spec.shape[0], ny = spec.shape[1], nt = spec.shape[2];
    const double hx = spec.spacing(0), hy = spec.spacing(1);
    const auto vals = f.values();
    const std::size_t slice = static_cast<std::size_t>(nx) * ny;

    std::vector<double> pow_cache(slice, -1.0);
    auto pd = [&](int dx, int dy) {
        double& v = pow_cache[static_cast<std::size_t>(std::abs(dy)) * nx + std::abs(dx)];
        if (v < 0.0) {
            double d2 = dx * hx * dx * hx + dy * hy * dy * hy;
            v = std::pow(std::sqrt(d2), gamma);
        }
        return v;
    };

    SeminormResult best;
    auto consider = [&](std::size_t p, std::size_t q, int dx, int dy) {
        double quot = std::fabs(vals[q] - vals[p]) / pd(dx, dy);
        if (quot > best.value) {
            best.value = quot;
            best.node_a = p;
            best.node_b = q;
        }
    };

    if (exhaustive) {
        for (int k = 0; k < nt; ++k) {
            const std::size_t base = slice * static_cast<std::size_t>(k);
            for (std::size_t p = 0; p < slice; ++p)
                for (std::size_t q = p + 1; q < slice; ++q) {
                    int dx = static_cast<int>(q % nx) - static_cast<int>(p % nx);
                    int dy = static_cast<int>(q / nx) - static_cast<int>(p / nx);
                    consider(base + p, base + q, dx, dy);
                }
        }
        return best;
    }

    // Nearest neighbours along and across axes, then a strided sublattice.
    const int offs[3][2] = {{1, 0}, {0, 1}, {1, 1}};
    for (int k = 0; k < nt; ++k) {
        const std::size_t base = slice * static_cast<std::size_t>(k);
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
                for (auto& o : offs) {
                    if (ix + o[0] >= nx || iy + o[1] >= ny) continue;
                    std::size_t p = base + static_cast<std::size_t>(iy) * nx + ix;
                    std::size_t q = p + static_cast<std::size_t>(o[1]) * nx + o[0];
                    consider(p, q, o[0], o[1]);
                }
    }
    auto xs = strided_sites(nx, 16), ys = strided_sites(ny, 16);
    for (int k = 0; k < nt; ++k) {
        const std::size_t base = slice * static_cast<std::size_t>(k);
        for (std::size_t a = 0; a < xs.size() * ys.size(); ++a)
            for (std::size_t b = a + 1; b < xs.size() * ys.size(); ++b) {
                int ax = xs[a % xs.size()], ay = ys[a / xs.size()];
                int bx = xs[b % xs.size()], by = ys[b / xs.size()];
                std::size_t p = base + static_cast<std::size_t>(ay) * nx + ax;
                std::size_t q = base + static_cast<std::size_t>(by) * nx + bx;
                consider(p, q, bx - ax, by - ay);
            }
    }
    return best;
}

}  // namespace

double sup_norm(const GridFunction& f, const std::optional<Region>& region) {
    const GridSpec& spec = f.spec();
    IndexBox box = index_box(spec, region);
    if (box.empty) throw std::invalid_argument("sup_norm: empty region");
    if (!region) return f.max_abs();

    auto st = spec.strides();
    double best = 0.0;
    std::vector<int> idx(box.lo);
    for (;;) {
        std::size_t flat = 0;
        for (int a = 0; a < spec.rank(); ++a)
            flat += st[a] * static_cast<std::size_t>(idx[a]);
        best = std::max(best, std::fabs(f[flat]));
        int a = 0;
        while (a < spec.rank() && ++idx[a] > box.hi[a]) {
            idx[a] = box.lo[a];
            ++a;
        }
        if (a == spec.rank()) break;
    }
    return best;
}

SeminormResult holder_seminorm_x_info(const GridFunction& f, double gamma) {
    check_gamma(gamma);
    const GridSpec& spec = f.spec();
    if (spec.shape[0] < 2)
        throw std::invalid_argument("holder_seminorm_x: need at least 2 spatial nodes");
    if (spec.n == 1) {
        bool exhaustive = spec.shape[0] <= 64;
        return axis_pair_scan(f, 0, gamma, exhaustive);
    }
    bool exhaustive = spec.shape[0] <= 32 && spec.shape[1] <= 32;
    return planar_pair_scan(f, gamma, exhaustive);
}

double holder_seminorm_x(const GridFunction& f, double gamma) {
    return holder_seminorm_x_info(f, gamma).value;
}

SeminormResult holder_seminorm_t_info(const GridFunction& f, double gamma) {
    check_gamma(gamma);
    const GridSpec& spec = f.spec();
    const int axis = spec.time_axis();
    bool exhaustive = spec.shape[axis] <= 64;
    return axis_pair_scan(f, axis, 0.5 * gamma, exhaustive);
}

double holder_seminorm_t(const GridFunction& f, double gamma) {
    return holder_seminorm_t_info(f, gamma).value;
}

HolderReport holder_norm(const GridFunction& f, double gamma) {
    HolderReport r;
    r.gamma = gamma;
    r.sup_norm = sup_norm(f);
    r.semi_x = holder_seminorm_x(f, gamma);
    r.semi_t = holder_seminorm_t(f, gamma);
    r.total = r.sup_norm + r.semi_x + r.semi_t;
    return r;
}

namespace {

// Shared cylinder geometry: spatial offsets |dx * h| < r per axis (Euclidean
// ball for n=2), time offsets |dt * h_t| < r^2. Derived by direct predicate
// so oracle-side membership tests agree bitwise.
int max_offset(double h, double bound, int cap) {
    int d = 0;
    while (d + 1 <= cap && (d + 1) * h < bound) ++d;
    return d;
}

struct CylinderShape {
    double r = 0.0;
    int a_x = 0, a_y = 0, b_t = 0;           // half-widths in nodes
    std::vector<int> row_half;               // n=2: x half-width per dy
};

}  // namespace

BmoReport bmo_norm(const GridFunction& f, const std::optional<Region>& region) {
    const GridSpec& spec = f.spec();
    IndexBox box = index_box(spec, region);
    if (box.empty) throw std::invalid_argument("bmo_norm: degenerate domain");

    const int rank = spec.rank();
    const int taxis = spec.time_axis();
    const double hx = spec.spacing(0);
    const double ht = spec.spacing(taxis);
    const double width_x = (box.hi[0] - box.lo[0] + 1) * hx;

    bool exhaustive = true;
    for (int a = 0; a < rank; ++a)
        if (box.hi[a] - box.lo[a] + 1 > 32) exhaustive = false;

    const auto vals = f.values();
    const auto st = spec.strides();

    BmoReport report;
    report.center.assign(rank, 0.0);

    for (double r = 2.0 * hx; r <= width_x; r *= 2.0) {
        CylinderShape shape;
        shape.r = r;
        shape.a_x = max_offset(hx, r, spec.shape[0]);
        shape.b_t = max_offset(ht, r * r, spec.shape[taxis]);
        if (spec.n == 2) {
            const double hy = spec.spacing(1);
            shape.a_y = max_offset(hy, r, spec.shape[1]);
            shape.row_half.resize(static_cast<std::size_t>(shape.a_y) + 1);
            for (int dy = 0; dy <= shape.a_y; ++dy) {
                int dmax = 0;
                while ((dmax + 1) * hx * (dmax + 1) * hx + dy * hy * dy * hy < r * r &&
                       dmax + 1 <= spec.shape[0])
                    ++dmax;
                shape.row_half[static_cast<std::size_t>(dy)] = dmax;
            }
        }

        int sx = exhaustive ? 1 : std::max(1, (shape.a_x + 1) / 2);
        int stt = exhaustive ? 1 : std::max(1, (shape.b_t + 1) / 2);
        report.stride_x = std::max(report.stride_x, sx);
        report.stride_t = std::max(report.stride_t, stt);

        auto clip = [](int v, int lo, int hi) { return std::min(std::max(v, lo), hi); };

        std::vector<int> center(rank);
        for (int kc = box.lo[taxis]; kc <= box.hi[taxis]; kc += stt) {
            const int k0 = clip(kc - shape.b_t, box.lo[taxis], box.hi[taxis]);
            const int k1 = clip(kc + shape.b_t, box.lo[taxis], box.hi[taxis]);
            for (int yc = (spec.n == 2 ? box.lo[1] : 0);
                 yc <= (spec.n == 2 ? box.hi[1] : 0); yc += sx)
                for (int xc = box.lo[0]; xc <= box.hi[0]; xc += sx) {
                    double sum = 0.0;
                    long count = 0;
                    auto for_each_node = [&](auto&& fn) {
                        for (int k = k0; k <= k1; ++k) {
                            if (spec.n == 1) {
                                const int i0 = clip(xc - shape.a_x, box.lo[0], box.hi[0]);
                                const int i1 = clip(xc + shape.a_x, box.lo[0], box.hi[0]);
                                std::size_t base = st[taxis] * static_cast<std::size_t>(k);
                                for (int i = i0; i <= i1; ++i)
                                    fn(base + static_cast<std::size_t>(i));
                            } else {
                                for (int dy = -shape.a_y; dy <= shape.a_y; ++dy) {
                                    int y = yc + dy;
                                    if (y < box.lo[1] || y > box.hi[1]) continue;
                                    int half = shape.row_half[static_cast<std::size_t>(
                                        std::abs(dy))];
                                    const int i0 = clip(xc - half, box.lo[0], box.hi[0]);
                                    const int i1 = clip(xc + half, box.lo[0], box.hi[0]);
                                    std::size_t base =
                                        st[taxis] * static_cast<std::size_t>(k) +
                                        st[1] * static_cast<std::size_t>(y);
                                    for (int i = i0; i <= i1; ++i)
                                        fn(base + static_cast<std::size_t>(i));
                                }
                            }
                        }
                    };
                    for_each_node([&](std::size_t flat) {
                        sum += vals[flat];
                        ++count;
                    });
                    if (count == 0) continue;
                    const double mean = sum / static_cast<double>(count);
                    double dev = 0.0;
                    for_each_node([&](std::size_t flat) {
                        dev += std::fabs(vals[flat] - mean);
                    });
                    const double osc = dev / static_cast<double>(count);
                    ++report.cylinders_scanned;
                    if (osc > report.value) {
                        report.value = osc;
                        report.radius = r;
                        report.center[0] = spec.coord(0, xc);
                        if (spec.n == 2) report.center[1] = spec.coord(1, yc);
                        report.center[static_cast<std::size_t>(taxis)] =
                            spec.coord(taxis, kc);
                    }
                }
        }
    }
    return report;
}

double lp_norm(const GridFunction& f, int p, const std::optional<Region>& region) {
    if (p != 1 && p != 2) throw std::invalid_argument("lp_norm: p must be 1 or 2");
    const GridSpec& spec = f.spec();
    IndexBox box = index_box(spec, region);
    if (box.empty) throw std::invalid_argument("lp_norm: empty region");

    double weight = 1.0;
    for (int a = 0; a < spec.rank(); ++a) weight *= spec.spacing(a);

    auto st = spec.strides();
    double acc = 0.0;
    std::vector<int> idx(box.lo);
    for (;;) {
        std::size_t flat = 0;
        for (int a = 0; a < spec.rank(); ++a)
            flat += st[a] * static_cast<std::size_t>(idx[a]);
        double v = f[flat];
        acc += (p == 1) ? std::fabs(v) : v * v;
        int a = 0;
        while (a < spec.rank() && ++idx[a] > box.hi[a]) {
            idx[a] = box.lo[a];
            ++a;
        }
        if (a == spec.rank()) break;
    }
    acc *= weight;
    return p == 1 ? acc : std::sqrt(acc);
}

double log_plus(double s) {
    if (s < 0.0) throw std::invalid_argument("log_plus: negative argument");
    return std::log(M_E + s);
}

}  // namespace paralog
