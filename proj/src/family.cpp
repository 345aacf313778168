#include "paralog/family.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "paralog/fft.hpp"
#include "paralog/parallel.hpp"

namespace paralog {

std::uint64_t Rng::next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
}

std::uint64_t member_seed(std::uint64_t master, std::uint64_t index) {
    Rng r(master + index * 0x9E3779B97F4A7C15ULL);
    return r.next();
}

FamilyKind family_kind_from_string(const std::string& name) {
    if (name == "trig-random") return FamilyKind::trig_random;
    if (name == "bump") return FamilyKind::bump;
    if (name == "lacunary") return FamilyKind::lacunary;
    if (name == "heat-smoothed-noise") return FamilyKind::heat_noise;
    if (name == "holder-rough") return FamilyKind::holder_rough;
    throw std::invalid_argument("unknown family kind '" + name + "'");
}

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::trig_random: return "trig-random";
        case FamilyKind::bump: return "bump";
        case FamilyKind::lacunary: return "lacunary";
        case FamilyKind::heat_noise: return "heat-smoothed-noise";
        case FamilyKind::holder_rough: return "holder-rough";
    }
    return "?";
}

double time_window(const GridSpec& spec, double t, int power) {
    const int ta = spec.time_axis();
    const double lt = spec.length(ta);
    const double mid = spec.lo[ta] + 0.5 * lt;
    double c = std::cos(M_PI * (t - mid) / lt);
    return std::pow(c * c, power);
}

namespace {

int window_power(const GridSpec& spec) {
    return std::min(6, std::max(1, spec.shape[spec.time_axis()] / 16));
}

double bump_profile(double s) {
    double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

double bump_profile_derivative(double s) {
    double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    double d = 1.0 - s2;
    return bump_profile(s) * (-2.0 * s) / (d * d);
}

struct TrigTerm {
    double amp, kx, ky, kt, phx, phy, pht;
};

// Random band-limited trig sum; g carries sin in x so f = dg/dx is exact.
FamilyMember make_trig_random(std::uint64_t seed, const GridSpec& spec, int modes,
                              double decay) {
    Rng rng(seed);
    const double lx = spec.length(0);
    const int kx_max = std::max(1, spec.shape[0] / 8);
    const int kt_max = std::min(4, std::max(0, spec.shape[spec.time_axis()] / 16));
    const int p = window_power(spec);

    std::vector<TrigTerm> terms;
    for (int m = 0; m < modes; ++m) {
        TrigTerm t{};
        t.kx = rng.uniform_int(1, kx_max);
        t.kt = rng.uniform_int(0, kt_max);
        t.amp = rng.uniform(0.5, 1.5) / std::pow(t.kx, decay);
        t.phx = rng.uniform(0.0, 2.0 * M_PI);
        t.pht = rng.uniform(0.0, 2.0 * M_PI);
        if (spec.n == 2) {
            t.ky = rng.uniform_int(1, std::max(1, spec.shape[1] / 8));
            t.phy = rng.uniform(0.0, 2.0 * M_PI);
        }
        terms.push_back(t);
    }

    auto g_gen = [&](std::span<const double> x, double t) {
        double acc = 0.0;
        const double lt = spec.length(spec.time_axis());
        for (const auto& tm : terms) {
            double v = tm.amp * std::sin(2.0 * M_PI * tm.kx * x[0] / lx + tm.phx);
            if (spec.n == 2)
                v *= std::sin(2.0 * M_PI * tm.ky * x[1] / spec.length(1) + tm.phy);
            v *= std::cos(2.0 * M_PI * tm.kt * t / lt + tm.pht);
            acc += v;
        }
        return acc * time_window(spec, t, p);
    };
    GridFunction g = sample(g_gen, spec, "trig-random g seed=" + std::to_string(seed));
    GridFunction f = spectral_derivative_x(g, 0);
    return FamilyMember{seed, std::move(g), std::move(f)};
}

FamilyMember make_bump(std::uint64_t seed, const GridSpec& spec) {
    Rng rng(seed);
    std::vector<double> center(spec.rank()), halfwidth(spec.rank());
    for (int a = 0; a < spec.rank(); ++a) {
        double l = spec.length(a);
        center[a] = spec.lo[a] + l * rng.uniform(0.45, 0.55);
        halfwidth[a] = l * rng.uniform(0.18, 0.3);
    }
    double amp = rng.uniform(0.5, 2.0);

    auto profile = [&](std::span<const double> x, double t, int d_axis) {
        double v = amp;
        for (int a = 0; a < spec.rank(); ++a) {
            double u = a < spec.n ? x[a] : t;
            double s = (u - center[a]) / halfwidth[a];
            if (a == d_axis)
                v *= bump_profile_derivative(s) / halfwidth[a];
            else
                v *= bump_profile(s);
        }
        return v;
    };
    GridFunction g = sample(
        [&](std::span<const double> x, double t) { return profile(x, t, -1); }, spec,
        "bump g seed=" + std::to_string(seed));
    GridFunction f = sample(
        [&](std::span<const double> x, double t) { return profile(x, t, 0); }, spec,
        "bump f seed=" + std::to_string(seed));
    return FamilyMember{seed, std::move(g), std::move(f)};
}

FamilyMember make_lacunary_member(std::uint64_t seed, const GridSpec& spec, int depth) {
    Rng rng(seed);
    auto [g, f] = lacunary_pair(spec, depth, 1);
    // random per-shell phases keep the dyadic-shell spectrum, vary the member
    const double lx = spec.length(0);
    const int p = window_power(spec);
    std::vector<double> phase(static_cast<std::size_t>(depth));
    for (auto& ph : phase) ph = rng.uniform(0.0, 2.0 * M_PI);
    auto gen = [&](int deriv) {
        return [&, deriv](std::span<const double> x, double t) {
            double acc = 0.0;
            for (int k = 1; k <= depth; ++k) {
                double w = std::ldexp(2.0 * M_PI / lx, k);  // 2^k * base frequency
                double ph = phase[static_cast<std::size_t>(k - 1)];
                acc += deriv ? std::cos(w * x[0] + ph)
                             : std::sin(w * x[0] + ph) / w;
            }
            return acc * time_window(spec, t, p);
        };
    };
    GridFunction gg = sample(gen(0), spec, "lacunary g seed=" + std::to_string(seed));
    GridFunction ff = sample(gen(1), spec, "lacunary f seed=" + std::to_string(seed));
    return FamilyMember{seed, std::move(gg), std::move(ff)};
}

// White noise shaped by a Gaussian gauge multiplier, assembled spectrally so
// that g = f / (i xi_x) is exact and everything is strictly band-limited.
FamilyMember make_heat_noise(std::uint64_t seed, const GridSpec& spec) {
    Rng rng(seed);
    const std::size_t total = spec.node_count();
    std::vector<std::complex<double>> fhat(total, {0.0, 0.0});
    std::vector<std::complex<double>> ghat(total, {0.0, 0.0});

    std::vector<int> idx(spec.rank(), 0);
    const double rho_c = 0.25 * quasi_norm(M_PI * spec.shape[0] / spec.length(0),
                                           M_PI * spec.shape[spec.time_axis()] /
                                               spec.length(spec.time_axis()));
    std::vector<double> xi(spec.rank());
    const auto st = spec.strides();
    std::size_t flat = 0;
    for (;;) {
        bool keep = true;
        for (int a = 0; a < spec.rank(); ++a) {
            int k = signed_mode(idx[a], spec.shape[a]);
            if (std::abs(k) > spec.shape[a] / 4) keep = false;
            xi[a] = lattice_frequency(spec, a, idx[a]);
        }
        if (signed_mode(idx[0], spec.shape[0]) == 0) keep = false;
        if (keep) {
            // draw once per conjugate pair, mirror with the conjugate
            std::size_t mirror = 0;
            for (int a = 0; a < spec.rank(); ++a) {
                int mi = (spec.shape[a] - idx[a]) % spec.shape[a];
                mirror += st[a] * static_cast<std::size_t>(mi);
            }
            if (flat <= mirror) {
                double rho = quasi_norm(std::span<const double>(xi.data(),
                                                                static_cast<std::size_t>(spec.n)),
                                        xi[spec.rank() - 1]);
                double w = std::exp(-(rho / rho_c) * (rho / rho_c));
                std::complex<double> c(rng.gaussian() * w, rng.gaussian() * w);
                if (flat == mirror) c = std::complex<double>(c.real(), 0.0);
                fhat[flat] = c;
                fhat[mirror] = std::conj(c);
                std::complex<double> inv_ix(0.0, -1.0 / xi[0]);
                ghat[flat] = c * inv_ix;
                ghat[mirror] = std::conj(ghat[flat]);
            }
        }
        int a = 0;
        while (a < spec.rank() && ++idx[a] == spec.shape[a]) idx[a++] = 0;
        if (a == spec.rank()) break;
        ++flat;
    }

    fft_inverse(fhat, spec.shape);
    fft_inverse(ghat, spec.shape);
    GridFunction f0 = real_part(spec, fhat, "heat-noise f seed=" + std::to_string(seed),
                                1.0);
    GridFunction g0 = real_part(spec, ghat, "heat-noise g seed=" + std::to_string(seed),
                                1.0);
    // normalize to unit sup, same factor on both sides of f = dg/dx
    double s = f0.max_abs();
    double scale = s > 0.0 ? 1.0 / s : 1.0;
    std::vector<double> fv(f0.values().begin(), f0.values().end());
    std::vector<double> gv(g0.values().begin(), g0.values().end());
    for (auto& v : fv) v *= scale;
    for (auto& v : gv) v *= scale;
    return FamilyMember{seed,
                        GridFunction(spec, std::move(gv), g0.label()),
                        GridFunction(spec, std::move(fv), f0.label())};
}

// Weierstrass-type sum: per-level amplitude 2^{-gamma j} against spatial
// frequency 2^j (and 4^j in time), the classical prescribed-exponent model.
FamilyMember make_holder_rough(std::uint64_t seed, const GridSpec& spec,
                               double exponent) {
    Rng rng(seed);
    const double lx = spec.length(0);
    const double lt = spec.length(spec.time_axis());
    const double w0 = 2.0 * M_PI / lx;
    const double wt0 = 2.0 * M_PI / lt;
    const int jx_max = static_cast<int>(std::floor(std::log2(spec.shape[0] / 4)));
    const int jt_max =
        static_cast<int>(std::floor(std::log2(spec.shape[spec.time_axis()] / 4) / 2.0));
    const int p = window_power(spec);

    std::vector<double> phx, pht, chx;
    for (int j = 1; j <= jx_max; ++j) phx.push_back(rng.uniform(0.0, 2.0 * M_PI));
    for (int j = 1; j <= jt_max; ++j) {
        pht.push_back(rng.uniform(0.0, 2.0 * M_PI));
        chx.push_back(rng.uniform(0.0, 2.0 * M_PI));
    }

    auto gen = [&](int deriv) {
        return [&, deriv](std::span<const double> x, double t) {
            double acc = 0.0;
            for (int j = 1; j <= jx_max; ++j) {
                double w = std::ldexp(w0, j);
                double a = std::exp2(-exponent * j);
                double ph = phx[static_cast<std::size_t>(j - 1)];
                double sp = deriv ? std::cos(w * x[0] + ph) : std::sin(w * x[0] + ph) / w;
                acc += a * sp * time_window(spec, t, p);
            }
            for (int j = 1; j <= jt_max; ++j) {
                double wt = wt0 * std::pow(4.0, j);
                double a = std::exp2(-exponent * j);
                double ph = pht[static_cast<std::size_t>(j - 1)];
                double ch = chx[static_cast<std::size_t>(j - 1)];
                double sp = deriv ? std::cos(w0 * x[0] + ch) : std::sin(w0 * x[0] + ch) / w0;
                acc += a * sp * std::cos(wt * t + ph);
            }
            return acc;
        };
    };
    GridFunction g = sample(gen(0), spec, "holder-rough g seed=" + std::to_string(seed));
    GridFunction f = sample(gen(1), spec, "holder-rough f seed=" + std::to_string(seed));
    return FamilyMember{seed, std::move(g), std::move(f)};
}

}  // namespace

std::vector<FamilyMember> generate_family(const FamilySpec& spec, const GridSpec& grid) {
    grid.validate();
    if (!grid.periodic)
        throw std::invalid_argument("generate_family: periodic grid required");
    if (spec.count < 1) throw std::invalid_argument("generate_family: count must be >= 1");

    std::vector<std::optional<FamilyMember>> slots(static_cast<std::size_t>(spec.count));
    parallel_for(slots.size(), [&](std::size_t i) {
        std::uint64_t seed = member_seed(spec.master_seed, spec.index_offset + i);
        switch (spec.kind) {
            case FamilyKind::trig_random:
                slots[i] = make_trig_random(seed, grid, spec.modes, spec.decay);
                break;
            case FamilyKind::bump:
                slots[i] = make_bump(seed, grid);
                break;
            case FamilyKind::lacunary:
                slots[i] = make_lacunary_member(seed, grid, spec.lacunary_depth);
                break;
            case FamilyKind::heat_noise:
                slots[i] = make_heat_noise(seed, grid);
                break;
            case FamilyKind::holder_rough:
                slots[i] = make_holder_rough(seed, grid, spec.roughness);
                break;
        }
    });
    std::vector<FamilyMember> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

GridFunction generate_omega_function(FamilyKind kind, std::uint64_t seed,
                                     const GridSpec& grid) {
    Rng rng(seed);
    const int p = window_power(grid);
    switch (kind) {
        case FamilyKind::bump: {
            std::vector<double> center(grid.rank()), halfwidth(grid.rank());
            for (int a = 0; a < grid.rank(); ++a) {
                double l = grid.length(a);
                center[a] = grid.lo[a] + l * rng.uniform(0.3, 0.7);
                halfwidth[a] = l * rng.uniform(0.2, 0.45);
            }
            double amp = rng.uniform(0.5, 2.0);
            return sample(
                [&](std::span<const double> x, double t) {
                    double v = amp;
                    for (int a = 0; a < grid.rank(); ++a) {
                        double u = a < grid.n ? x[a] : t;
                        v *= bump_profile((u - center[a]) / halfwidth[a]);
                    }
                    return v;
                },
                grid, "omega bump seed=" + std::to_string(seed));
        }
        default: {
            // smooth non-periodic trig mixture
            int terms = 6;
            std::vector<double> ax(terms), bt(terms), phx(terms), pht(terms), amp(terms);
            for (int m = 0; m < terms; ++m) {
                ax[m] = rng.uniform(0.5, 18.0) / grid.length(0);
                bt[m] = rng.uniform(0.5, 18.0) / grid.length(grid.time_axis());
                phx[m] = rng.uniform(0.0, 2.0 * M_PI);
                pht[m] = rng.uniform(0.0, 2.0 * M_PI);
                amp[m] = rng.uniform(0.3, 1.0);
            }
            (void)p;
            return sample(
                [&](std::span<const double> x, double t) {
                    double acc = 0.0;
                    for (int m = 0; m < terms; ++m) {
                        double v = amp[m] * std::cos(2.0 * M_PI * ax[m] * x[0] + phx[m]);
                        if (grid.n == 2)
                            v *= std::cos(2.0 * M_PI * ax[m] * x[1] + phx[m] * 0.5);
                        acc += v * std::cos(2.0 * M_PI * bt[m] * t + pht[m]);
                    }
                    return acc;
                },
                grid, "omega trig seed=" + std::to_string(seed));
        }
    }
}

std::pair<GridFunction, GridFunction> lacunary_pair(const GridSpec& spec, int depth,
                                                    int base_mode) {
    spec.validate();
    if (depth < 1) throw std::invalid_argument("lacunary_pair: depth must be >= 1");
    if (base_mode * (1 << depth) > spec.shape[0] / 4)
        throw std::invalid_argument("lacunary_pair: depth exceeds resolvable levels");
    const double lx = spec.length(0);
    const double w0 = 2.0 * M_PI * base_mode / lx;
    const int p = window_power(spec);

    auto gen = [&](int deriv) {
        return [&, deriv](std::span<const double> x, double t) {
            double acc = 0.0;
            for (int k = 1; k <= depth; ++k) {
                double w = std::ldexp(w0, k);
                acc += deriv ? std::cos(w * x[0]) : std::sin(w * x[0]) / w;
            }
            return acc * time_window(spec, t, p);
        };
    };
    GridFunction g = sample(gen(0), spec, "lacunary g depth=" + std::to_string(depth));
    GridFunction f = sample(gen(1), spec, "lacunary f depth=" + std::to_string(depth));
    return {std::move(g), std::move(f)};
}

double high_gauge_energy_fraction(const GridFunction& f, const FilterBank& bank) {
    if (!f.spec().same_lattice(bank.spec()))
        throw std::invalid_argument("high_gauge_energy_fraction: grid mismatch");
    auto spectrum = fft_of(f);
    fft_forward(spectrum, f.spec().shape);
    const auto& rho = bank.gauges();
    const double cutoff = std::ldexp(1.0, bank.j_max());
    double total = 0.0, high = 0.0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        double e = std::norm(spectrum[i]);
        total += e;
        if (rho[i] >= cutoff) high += e;
    }
    return total > 0.0 ? high / total : 0.0;
}

}  // namespace paralog
