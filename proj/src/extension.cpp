#include "paralog/extension.hpp"

#include <cmath>
#include <stdexcept>

#include "paralog/littlewood_paley.hpp"

namespace paralog {

namespace {

bool close(double a, double b, double scale = 1.0) {
    return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(scale));
}

// Plateau [p_lo, p_hi] inside support [s_lo, s_hi], smooth-step ramps.
double plateau_bump(double u, double s_lo, double p_lo, double p_hi, double s_hi) {
    if (u <= s_lo || u >= s_hi) return 0.0;
    if (u >= p_lo && u <= p_hi) return 1.0;
    if (u < p_lo) return smooth_step((u - s_lo) / (p_lo - s_lo));
    return smooth_step((s_hi - u) / (s_hi - p_hi));
}

}  // namespace

ExtensionLayout ExtensionLayout::make(double T, int n) {
    if (!(T > 0.0)) throw std::invalid_argument("ExtensionLayout: T must be positive");
    if (n != 1 && n != 2) throw std::invalid_argument("ExtensionLayout: n must be 1 or 2");
    ExtensionLayout l;
    l.n = n;
    l.T = T;
    auto boxes = [&](Region& r, double x_lo, double x_hi, double t_lo, double t_hi) {
        r.lo.assign(static_cast<std::size_t>(n), x_lo);
        r.hi.assign(static_cast<std::size_t>(n), x_hi);
        r.lo.push_back(t_lo);
        r.hi.push_back(t_hi);
    };
    boxes(l.omega, 0.0, 1.0, 0.0, T);
    boxes(l.omega_tilde, -1.0, 2.0, -T, 2.0 * T);
    boxes(l.z1, -0.25, 1.25, -0.25 * T, 1.25 * T);
    boxes(l.z2, -0.75, 1.75, -0.75 * T, 1.75 * T);
    return l;
}

int fold_index(int a, int n_base) {
    const int s = a - n_base;
    if (s >= 0 && s < n_base) return s;
    const int p = s < 0 ? -s : 2 * n_base - s;
    return std::min(p, n_base - 1);
}

std::vector<int> reflect_preimage_node(std::span<const int> idx,
                                       const GridSpec& omega_spec) {
    std::vector<int> out(static_cast<std::size_t>(omega_spec.rank()));
    for (int a = 0; a < omega_spec.rank(); ++a)
        out[static_cast<std::size_t>(a)] = fold_index(idx[a], omega_spec.shape[a]);
    return out;
}

GridFunction reflect(const GridFunction& f, const ExtensionLayout& layout) {
    const GridSpec& spec = f.spec();
    if (spec.n != layout.n)
        throw std::invalid_argument("reflect: spatial dimension mismatch");
    for (int a = 0; a < spec.n; ++a)
        if (!close(spec.lo[a], 0.0) || !close(spec.hi[a], 1.0))
            throw std::invalid_argument("reflect: grid is not the unit spatial box");
    if (!close(spec.lo[spec.time_axis()], 0.0, layout.T) ||
        !close(spec.hi[spec.time_axis()], layout.T, layout.T))
        throw std::invalid_argument("reflect: grid time interval is not (0,T)");

    GridSpec out_spec = spec;
    out_spec.periodic = false;
    for (int a = 0; a < spec.rank(); ++a) {
        out_spec.shape[a] = 3 * spec.shape[a];
        double w = spec.hi[a] - spec.lo[a];
        out_spec.lo[a] = spec.lo[a] - w;
        out_spec.hi[a] = spec.hi[a] + w;
    }
    out_spec.validate();

    const auto in_strides = spec.strides();
    std::vector<double> out(out_spec.node_count());
    std::vector<int> idx(out_spec.rank(), 0);
    std::size_t flat = 0;
    for (;;) {
        std::size_t src = 0;
        for (int a = 0; a < spec.rank(); ++a)
            src += in_strides[a] *
                   static_cast<std::size_t>(fold_index(idx[a], spec.shape[a]));
        out[flat++] = f[src];
        int a = 0;
        while (a < out_spec.rank() && ++idx[a] == out_spec.shape[a]) idx[a++] = 0;
        if (a == out_spec.rank()) break;
    }
    return GridFunction(out_spec, std::move(out), "reflected " + f.label());
}

SpaceTimePoint reflect_preimage(const SpaceTimePoint& z, const ExtensionLayout& layout) {
    if (static_cast<int>(z.x.size()) != layout.n)
        throw std::invalid_argument("reflect_preimage: dimension mismatch");
    auto fold = [](double u, double period) {
        // even reflection about 0 and about `period` on [-period, 2*period]
        if (u < 0.0) return -u;
        if (u > period) return 2.0 * period - u;
        return u;
    };
    SpaceTimePoint out = z;
    for (double& xi : out.x) {
        if (xi < -1.0 || xi > 2.0)
            throw std::invalid_argument("reflect_preimage: point outside Omega~_T");
        xi = fold(xi, 1.0);
    }
    if (out.t < -layout.T || out.t > 2.0 * layout.T)
        throw std::invalid_argument("reflect_preimage: point outside Omega~_T");
    out.t = fold(out.t, layout.T);
    return out;
}

CutoffPsi build_psi(const ExtensionLayout& layout, const GridSpec& grid) {
    grid.validate();
    if (grid.n != layout.n)
        throw std::invalid_argument("build_psi: spatial dimension mismatch");
    for (int a = 0; a < grid.rank(); ++a) {
        if (grid.lo[a] > layout.z2.lo[a] || grid.hi[a] < layout.z2.hi[a])
            throw std::invalid_argument("build_psi: grid does not cover Z2");
        double band = layout.z1.lo[a] - layout.z2.lo[a];
        if (grid.spacing(a) > 0.5 * band)
            throw std::invalid_argument("build_psi: transition band not resolvable");
    }

    auto psi_value = [&](std::span<const double> x, double t) {
        double v = 1.0;
        for (int a = 0; a < layout.n; ++a)
            v *= plateau_bump(x[a], layout.z2.lo[a], layout.z1.lo[a],
                              layout.z1.hi[a], layout.z2.hi[a]);
        const std::size_t ta = static_cast<std::size_t>(layout.n);
        v *= plateau_bump(t, layout.z2.lo[ta], layout.z1.lo[ta], layout.z1.hi[ta],
                          layout.z2.hi[ta]);
        return v;
    };
    return CutoffPsi{layout, sample(psi_value, grid, "psi cutoff")};
}

GridSpec default_extension_target(const ExtensionLayout& layout,
                                  const GridSpec& omega_spec) {
    GridSpec t = omega_spec;
    t.periodic = true;
    for (int a = 0; a < t.rank(); ++a) {
        t.shape[a] = 4 * omega_spec.shape[a];
        double w = omega_spec.hi[a] - omega_spec.lo[a];
        t.lo[a] = omega_spec.lo[a] - 1.5 * w;
        t.hi[a] = omega_spec.hi[a] + 1.5 * w;
    }
    t.validate();
    (void)layout;
    return t;
}

ExtensionResult extend(const GridFunction& f, const ExtensionLayout& layout,
                       const GridSpec& target) {
    target.validate();
    GridFunction reflected = reflect(f, layout);
    const GridSpec& rspec = reflected.spec();

    // The target lattice must contain every Omega~_T node.
    std::vector<int> base(static_cast<std::size_t>(target.rank()));
    for (int a = 0; a < target.rank(); ++a) {
        if (!close(target.spacing(a), rspec.spacing(a), rspec.spacing(a)))
            throw std::invalid_argument("extend: target spacing differs from source");
        double off = (rspec.lo[a] - target.lo[a]) / target.spacing(a);
        long b = std::lround(off);
        if (std::fabs(off - static_cast<double>(b)) > 1e-9 || b < 0 ||
            b + rspec.shape[a] > target.shape[a])
            throw std::invalid_argument("extend: target lattice misaligned with Omega~_T");
        base[static_cast<std::size_t>(a)] = static_cast<int>(b);
    }

    CutoffPsi psi = build_psi(layout, target);
    std::vector<double> out(target.node_count(), 0.0);
    const auto tstrides = target.strides();
    std::vector<int> idx(rspec.rank(), 0);
    std::size_t rflat = 0;
    for (;;) {
        std::size_t tflat = 0;
        for (int a = 0; a < rspec.rank(); ++a)
            tflat += tstrides[a] *
                     static_cast<std::size_t>(base[static_cast<std::size_t>(a)] + idx[a]);
        out[tflat] = psi.values[tflat] * reflected[rflat];
        ++rflat;
        int a = 0;
        while (a < rspec.rank() && ++idx[a] == rspec.shape[a]) idx[a++] = 0;
        if (a == rspec.rank()) break;
    }
    GridFunction extended(target, std::move(out), "extension of " + f.label());
    return ExtensionResult{std::move(extended), std::move(psi.values), layout};
}

TransferReport holder_transfer_check(const GridFunction& f, double gamma,
                                     const ExtensionLayout& layout) {
    ExtensionResult ext = extend(f, layout, default_extension_target(layout, f.spec()));
    TransferReport r;
    r.norm_in = holder_norm(f, gamma).total;
    r.norm_out = holder_norm(ext.extended, gamma).total;
    r.ratio = r.norm_in == 0.0 ? 1.0 : r.norm_out / r.norm_in;
    r.psi_semi_x = holder_seminorm_x(ext.psi, gamma);
    r.psi_semi_t = holder_seminorm_t(ext.psi, gamma);
    return r;
}

}  // namespace paralog
