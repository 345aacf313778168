#include "paralog/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>

#include "paralog/extension.hpp"

namespace paralog {

namespace oracle {

double holder_x(const GridFunction& f, double gamma) {
    const GridSpec& spec = f.spec();
    const double hx = spec.spacing(0);
    double best = 0.0;
    if (spec.n == 1) {
        const int nx = spec.shape[0], nt = spec.shape[spec.time_axis()];
        for (int k = 0; k < nt; ++k)
            for (int i = 0; i < nx; ++i)
                for (int i2 = i + 1; i2 < nx; ++i2) {
                    std::size_t base = static_cast<std::size_t>(k) * nx;
                    double q = std::fabs(f[base + i2] - f[base + i]) /
                               std::pow((i2 - i) * hx, gamma);
                    best = std::max(best, q);
                }
        return best;
    }
    const int nx = spec.shape[0], ny = spec.shape[1], nt = spec.shape[2];
    const double hy = spec.spacing(1);
    const std::size_t slice = static_cast<std::size_t>(nx) * ny;
    for (int k = 0; k < nt; ++k)
        for (std::size_t p = 0; p < slice; ++p)
            for (std::size_t q = p + 1; q < slice; ++q) {
                int dx = static_cast<int>(q % nx) - static_cast<int>(p % nx);
                int dy = static_cast<int>(q / nx) - static_cast<int>(p / nx);
                double d2 = dx * hx * dx * hx + dy * hy * dy * hy;
                std::size_t base = slice * static_cast<std::size_t>(k);
                double quot = std::fabs(f[base + q] - f[base + p]) /
                              std::pow(std::sqrt(d2), gamma);
                best = std::max(best, quot);
            }
    return best;
}

double holder_t(const GridFunction& f, double gamma) {
    const GridSpec& spec = f.spec();
    const int taxis = spec.time_axis();
    const double ht = spec.spacing(taxis);
    const int nt = spec.shape[taxis];
    const std::size_t stride = spec.strides()[taxis];
    double best = 0.0;
    for (std::size_t s = 0; s < stride; ++s)
        for (int k = 0; k < nt; ++k)
            for (int k2 = k + 1; k2 < nt; ++k2) {
                double q = std::fabs(f[s + stride * static_cast<std::size_t>(k2)] -
                                     f[s + stride * static_cast<std::size_t>(k)]) /
                           std::pow((k2 - k) * ht, 0.5 * gamma);
                best = std::max(best, q);
            }
    return best;
}

double bmo(const GridFunction& f) {
    const GridSpec& spec = f.spec();
    const int taxis = spec.time_axis();
    const double hx = spec.spacing(0);
    const double ht = spec.spacing(taxis);
    const double width_x = spec.shape[0] * hx;
    const auto st = spec.strides();
    double best = 0.0;

    for (double r = 2.0 * hx; r <= width_x; r *= 2.0) {
        for (int kc = 0; kc < spec.shape[taxis]; ++kc)
            for (int yc = 0; yc < (spec.n == 2 ? spec.shape[1] : 1); ++yc)
                for (int xc = 0; xc < spec.shape[0]; ++xc) {
                    double sum = 0.0;
                    long count = 0;
                    auto visit = [&](auto&& fn) {
                        for (int k = 0; k < spec.shape[taxis]; ++k) {
                            if (!(std::fabs((k - kc) * ht) < r * r)) continue;
                            for (int y = 0; y < (spec.n == 2 ? spec.shape[1] : 1); ++y) {
                                if (spec.n == 2) {
                                    double dy = (y - yc) * spec.spacing(1);
                                    double rem = r * r - dy * dy;
                                    for (int i = 0; i < spec.shape[0]; ++i) {
                                        double dx = (i - xc) * hx;
                                        if (dx * dx + dy * dy < r * r && rem > 0)
                                            fn(st[taxis] * static_cast<std::size_t>(k) +
                                               st[1] * static_cast<std::size_t>(y) +
                                               static_cast<std::size_t>(i));
                                    }
                                } else {
                                    for (int i = 0; i < spec.shape[0]; ++i)
                                        if (std::fabs((i - xc) * hx) < r)
                                            fn(st[taxis] * static_cast<std::size_t>(k) +
                                               static_cast<std::size_t>(i));
                                }
                            }
                        }
                    };
                    visit([&](std::size_t flat) {
                        sum += f[flat];
                        ++count;
                    });
                    if (count == 0) continue;
                    double mean = sum / static_cast<double>(count);
                    double dev = 0.0;
                    visit([&](std::size_t flat) { dev += std::fabs(f[flat] - mean); });
                    best = std::max(best, dev / static_cast<double>(count));
                }
    }
    return best;
}

}  // namespace oracle

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// Shared state across criteria; heavy pieces are built on first use so each
// cost lands in the criterion that needs it.
struct AcceptanceContext {
    const ExperimentConfig& cfg;
    std::optional<GridSpec> grid;
    std::optional<FilterBank> hom, inh;
    std::optional<std::vector<FamilyMember>> members;
    std::optional<FamilyRun> thm1_train, thm1_holdout, thm2_train, thm2_holdout;

    explicit AcceptanceContext(const ExperimentConfig& c) : cfg(c) {}

    void ensure_banks() {
        if (grid) return;
        grid = cfg.grid();
        hom = FilterBank::build(*grid, BankMode::homogeneous);
        inh = FilterBank::build(*grid, BankMode::inhomogeneous);
    }
    void ensure_members() {
        ensure_banks();
        if (!members) members = generate_family(cfg.family, *grid);
    }
    void ensure_thm1_train() {
        ensure_members();
        if (!thm1_train)
            thm1_train = run_theorem1_family(cfg, cfg.gammas, *members, *hom, *inh);
    }
    void ensure_thm1_holdout() {
        ensure_banks();
        if (thm1_holdout) return;
        FamilySpec fam = cfg.family;
        fam.index_offset += static_cast<std::uint64_t>(cfg.family.count);
        auto holdout_members = generate_family(fam, *grid);
        thm1_holdout = run_theorem1_family(cfg, cfg.gammas, holdout_members, *hom, *inh);
    }
    void ensure_thm2() {
        if (thm2_train) return;
        ExperimentConfig c2 = cfg;
        c2.T = 1.0;
        thm2_train = run_theorem2_family(c2, cfg.gammas, 0);
        thm2_holdout = run_theorem2_family(c2, cfg.gammas,
                                           static_cast<std::uint64_t>(cfg.family.count));
    }
};

CriterionResult c1_partition(AcceptanceContext& ctx) {
    CriterionResult r{1, "filter-bank partition of unity", false, "", 0.0};
    auto t0 = Clock::now();
    double worst = 0.0;
    for (int size : {128, 256, 512}) {
        ExperimentConfig c = ctx.cfg;
        c.nx = c.nt = size;
        GridSpec g = c.grid();
        for (auto mode : {BankMode::homogeneous, BankMode::inhomogeneous}) {
            FilterBank bank = FilterBank::build(g, mode);
            worst = std::max(worst, partition_residual(bank).max_residual_covered);
        }
    }
    double elapsed = seconds_since(t0);
    r.pass = worst <= 1e-10 && elapsed <= 5.0;
    r.details = "max residual " + fmt(worst) + " over 128..512 grids in " +
                fmt(elapsed) + "s";
    return r;
}

CriterionResult c2_reconstruction(AcceptanceContext& ctx) {
    CriterionResult r{2, "block reconstruction", false, "", 0.0};
    ctx.ensure_members();
    const auto& members = *ctx.members;
    std::vector<double> errs(members.size(), 0.0);
    std::vector<double> bands(members.size(), 0.0);
    parallel_for(members.size(), [&](std::size_t i) {
        const GridFunction& f = members[i].f;
        const double scale = f.max_abs();
        GridFunction rec_inh = reconstruct(decompose(f, *ctx.inh));
        double err_inh = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k)
            err_inh = std::max(err_inh, std::fabs(rec_inh[k] - f[k]));

        const double mean = f.mean();
        GridFunction rec_hom = reconstruct(decompose(f, *ctx.hom));
        double err_hom = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k)
            err_hom = std::max(err_hom, std::fabs(rec_hom[k] - (f[k] - mean)));
        errs[i] = std::max(err_inh, err_hom) / scale;
        bands[i] = high_gauge_energy_fraction(f, *ctx.inh);
    });
    double worst = 0.0, band = 0.0;
    for (double e : errs) worst = std::max(worst, e);
    for (double b : bands) band = std::max(band, b);
    r.pass = worst <= 1e-8 && band <= 1e-8;
    r.details = "max relative sup error " + fmt(worst) + ", top-octave energy " + fmt(band);
    return r;
}

CriterionResult c3_norm_oracles(AcceptanceContext& ctx) {
    CriterionResult r{3, "norm oracles at 32x32", false, "", 0.0};
    GridSpec small = GridSpec::line(32, 32, 0.0, 1.0, 0.0, 1.0, false);
    const double gammas[3] = {0.3, 0.5, 0.7};
    bool ok = true;
    double worst = 0.0;
    for (int s = 0; s < 25; ++s) {
        GridFunction f = generate_omega_function(
            FamilyKind::trig_random, member_seed(ctx.cfg.family.master_seed + 77, s),
            small);
        double gamma = gammas[s % 3];
        double fx = holder_seminorm_x(f, gamma), ox = oracle::holder_x(f, gamma);
        double ft = holder_seminorm_t(f, gamma), ot = oracle::holder_t(f, gamma);
        double fb = bmo_norm(f).value, ob = oracle::bmo(f);
        ok = ok && fx == ox && ft == ot && fb == ob;
        worst = std::max({worst, std::fabs(fx - ox), std::fabs(ft - ot),
                          std::fabs(fb - ob)});
    }
    r.pass = ok;
    r.details = "max |fast - oracle| = " + fmt(worst) + " over 25 seeds";
    return r;
}

CriterionResult c4_split_validity(AcceptanceContext& ctx) {
    CriterionResult r{4, "split-bound validity", false, "", 0.0};
    ctx.ensure_thm1_train();
    const FamilyRun& run = *ctx.thm1_train;
    r.pass = run.split_holds;
    r.details = "worst slack (bound - lhs) = " + fmt(run.worst_split_slack) + " over " +
                std::to_string(run.rows.size()) + " rows x N in {0..8}";
    return r;
}

CriterionResult c5_paper_constants() {
    CriterionResult r{5, "displayed split constants", false, "", 0.0};
    auto [c, cp] = paper_constants(0.5);
    double c_direct = std::sqrt(1.0 / (std::pow(2.0, 2.0 * 0.5) - 1.0));
    double cp_direct = std::pow(2.0, -0.5) / (1.0 - std::pow(2.0, -0.5));
    double err = std::max(std::fabs(c - c_direct), std::fabs(cp - cp_direct));
    bool literal = std::fabs(c - 1.0) <= 1e-12 && std::fabs(cp - 2.41421356) <= 1e-7;
    r.pass = err <= 1e-12 && literal;
    r.details = "C=" + fmt(c) + ", C'=" + fmt(cp) + ", err " + fmt(err);
    return r;
}

CriterionResult c6_component_estimates(AcceptanceContext& ctx) {
    CriterionResult r{6, "component estimates and Besov bracket", false, "", 0.0};
    ctx.ensure_thm1_train();
    const auto& rows = ctx.thm1_train->rows;
    const std::size_t gcount = ctx.cfg.gammas.size();

    bool finite = true, a3_ok = true;
    auto bracket = [&](std::size_t lo, std::size_t hi) {
        double c_star = 1.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& row = rows[i];
            double r1 = row.g_sup > 0 ? row.a1 / row.g_sup : 0.0;
            double r2 = row.bmo > 0 ? row.a2 / row.bmo : 0.0;
            double r3 = row.holder > 0 ? row.a3 / row.holder : 0.0;
            finite = finite && std::isfinite(r1) && std::isfinite(r2) && std::isfinite(r3);
            a3_ok = a3_ok && row.a3 <= row.besov * (1.0 + 1e-6);
            if (row.holder > 0 && row.besov > 0) {
                double ratio = row.besov / row.holder;
                c_star = std::max({c_star, ratio, 1.0 / ratio});
            }
        }
        return c_star;
    };
    const std::size_t half = 25 * gcount;
    double c_a = bracket(0, std::min(half, rows.size()));
    double c_b = bracket(std::min(half, rows.size()), rows.size());
    double drift = std::fabs(c_a - c_b) / std::max(c_a, c_b);
    r.pass = finite && a3_ok && drift <= 0.10;
    r.details = "bracket c*=" + fmt(c_a) + "/" + fmt(c_b) + " drift " + fmt(drift) +
                (a3_ok ? "" : " [A3>besov]") + (finite ? "" : " [non-finite ratio]");
    return r;
}

CriterionResult c7_extension(AcceptanceContext&) {
    CriterionResult r{7, "extension correctness", false, "", 0.0};
    bool ok = true;
    std::string note;
    for (double T : {0.5, 1.0, 2.0}) {
        ExtensionLayout layout = ExtensionLayout::make(T);
        // geometric separations between Z2 and the complement of Omega~_T
        double gx = std::min(layout.z2.lo[0] - layout.omega_tilde.lo[0],
                             layout.omega_tilde.hi[0] - layout.z2.hi[0]);
        double gt = std::min(layout.z2.lo[1] - layout.omega_tilde.lo[1],
                             layout.omega_tilde.hi[1] - layout.z2.hi[1]);
        if (!(gx >= 0.25 && gt >= 0.25 * T)) {
            ok = false;
            note += " separation(T=" + fmt(T) + ")";
        }

        GridSpec omega = GridSpec::line(32, 32, 0.0, 1.0, 0.0, T, false);
        GridSpec target = default_extension_target(layout, omega);
        CutoffPsi psi = build_psi(layout, target);
        for (std::size_t flat = 0; flat < psi.values.size(); ++flat) {
            std::vector<int> idx(2);
            idx[0] = static_cast<int>(flat % static_cast<std::size_t>(target.shape[0]));
            idx[1] = static_cast<int>(flat / static_cast<std::size_t>(target.shape[0]));
            double x = target.coord(0, idx[0]), t = target.coord(1, idx[1]);
            bool in_z1 = x >= layout.z1.lo[0] && x <= layout.z1.hi[0] &&
                         t >= layout.z1.lo[1] && t <= layout.z1.hi[1];
            bool out_z2 = x < layout.z2.lo[0] || x > layout.z2.hi[0] ||
                          t < layout.z2.lo[1] || t > layout.z2.hi[1];
            if (in_z1 && psi.values[flat] != 1.0) ok = false;
            if (out_z2 && psi.values[flat] != 0.0) ok = false;
        }

        for (int s = 0; s < 10 && ok; ++s) {
            GridFunction f = generate_omega_function(
                FamilyKind::trig_random, member_seed(911 + static_cast<int>(10 * T), s),
                omega);
            ExtensionResult ext = extend(f, layout, target);

            // node-exact restriction to Omega_T
            auto tst = ext.extended.spec().strides();
            int bx = static_cast<int>(std::lround((0.0 - target.lo[0]) / target.spacing(0)));
            int bt = static_cast<int>(std::lround((0.0 - target.lo[1]) / target.spacing(1)));
            for (int k = 0; k < omega.shape[1] && ok; ++k)
                for (int i = 0; i < omega.shape[0]; ++i) {
                    std::size_t tf = tst[0] * static_cast<std::size_t>(bx + i) +
                                     tst[1] * static_cast<std::size_t>(bt + k);
                    std::size_t of = static_cast<std::size_t>(k) * omega.shape[0] +
                                     static_cast<std::size_t>(i);
                    if (ext.extended[tf] != f[of]) {
                        ok = false;
                        note += " restriction";
                        break;
                    }
                }

            GridFunction ft = reflect(f, layout);
            const GridSpec& rs = ft.spec();
            // preimage consistency at every node
            for (int k = 0; k < rs.shape[1] && ok; ++k)
                for (int i = 0; i < rs.shape[0]; ++i) {
                    std::vector<int> idx{i, k};
                    auto pre = reflect_preimage_node(idx, omega);
                    std::size_t rf = static_cast<std::size_t>(k) * rs.shape[0] +
                                     static_cast<std::size_t>(i);
                    std::size_t of = static_cast<std::size_t>(pre[1]) * omega.shape[0] +
                                     static_cast<std::size_t>(pre[0]);
                    if (ft[rf] != f[of]) {
                        ok = false;
                        note += " preimage";
                        break;
                    }
                }

            // seam jumps never exceed the largest interior neighbour jump
            double interior = 0.0, seam = 0.0;
            const int nx = omega.shape[0], nt_ = omega.shape[1];
            const std::size_t row = static_cast<std::size_t>(rs.shape[0]);
            for (int k = 0; k < 3 * nt_; ++k)
                for (int i = 0; i + 1 < 3 * nx; ++i) {
                    double d = std::fabs(ft[static_cast<std::size_t>(k) * row + i + 1] -
                                         ft[static_cast<std::size_t>(k) * row + i]);
                    bool straddles = (i + 1 == nx) || (i + 1 == 2 * nx);
                    if (straddles)
                        seam = std::max(seam, d);
                    else if (i >= nx && i + 1 < 2 * nx && k >= nt_ && k < 2 * nt_)
                        interior = std::max(interior, d);
                }
            for (int k = 0; k + 1 < 3 * nt_; ++k)
                for (int i = 0; i < 3 * nx; ++i) {
                    double d = std::fabs(ft[static_cast<std::size_t>(k + 1) * row + i] -
                                         ft[static_cast<std::size_t>(k) * row + i]);
                    bool straddles = (k + 1 == nt_) || (k + 1 == 2 * nt_);
                    if (straddles)
                        seam = std::max(seam, d);
                    else if (k >= nt_ && k + 1 < 2 * nt_ && i >= nx && i < 2 * nx)
                        interior = std::max(interior, d);
                }
            if (seam > interior) {
                ok = false;
                note += " seam";
            }
        }

        // distance contraction over all same-time pairs at oracle scale
        GridSpec omega16 = GridSpec::line(16, 16, 0.0, 1.0, 0.0, T, false);
        const int m = 3 * 16;
        for (int a = 0; a < m && ok; ++a)
            for (int b = a + 1; b < m; ++b) {
                double xa = -1.0 + a * (3.0 / m), xb = -1.0 + b * (3.0 / m);
                double pa = omega16.coord(0, fold_index(a, 16));
                double pb = omega16.coord(0, fold_index(b, 16));
                if (std::fabs(xa - xb) + 1e-14 < std::fabs(pa - pb)) {
                    ok = false;
                    note += " contraction";
                    break;
                }
            }
    }
    r.pass = ok;
    r.details = ok ? "restriction/psi/seam/contraction exact for T in {0.5,1,2}"
                   : ("failed:" + note);
    return r;
}

CriterionResult c8_stability(AcceptanceContext& ctx) {
    CriterionResult r{8, "implied-constant stability", false, "", 0.0};
    ctx.ensure_thm1_train();
    ctx.ensure_thm1_holdout();
    ctx.ensure_thm2();

    bool ok = true;
    std::string note;
    auto check = [&](const FamilyRun& train, const FamilyRun& holdout,
                     const std::string& tag) {
        for (double gamma : ctx.cfg.gammas) {
            double c_t = 0.0, c_h = 0.0;
            for (const auto& row : train.rows)
                if (row.gamma == gamma) c_t = std::max(c_t, row.implied_c);
            for (const auto& row : holdout.rows)
                if (row.gamma == gamma) c_h = std::max(c_h, row.implied_c);
            double drift = std::fabs(c_t - c_h) / std::max(c_t, c_h);
            if (!(drift <= 0.05)) {
                ok = false;
                note += " " + tag + "(gamma=" + fmt(gamma) + ") drift " + fmt(drift);
            }
            for (const auto& row : holdout.rows)
                if (row.gamma == gamma && row.lhs > 1.05 * c_t * row.rhs_factor) {
                    ok = false;
                    note += " " + tag + " holdout inequality";
                    break;
                }
        }
    };
    check(*ctx.thm1_train, *ctx.thm1_holdout, "thm1");
    check(*ctx.thm2_train, *ctx.thm2_holdout, "thm2");
    r.pass = ok;
    r.details = ok ? "train/holdout implied-C agree within 5% (both theorems)"
                   : ("failed:" + note);
    return r;
}

CriterionResult c9_sharpness(AcceptanceContext& ctx) {
    CriterionResult r{9, "lacunary sharpness probe", false, "", 0.0};
    ctx.ensure_banks();
    std::vector<int> m_range{2, 3, 4, 5, 6};
    auto rows = sharpness_probe(m_range, *ctx.hom, 0.5);
    bool increasing = true;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double growth = rows[i].linf / rows[i].bmo;
        if (i > 0 && growth <= prev) increasing = false;
        prev = growth;
        rmin = std::min(rmin, rows[i].ratio);
        rmax = std::max(rmax, rows[i].ratio);
    }
    double band = rmax / rmin;
    r.pass = increasing && band <= 3.0;
    r.details = "sup/BMO strictly increasing: " + std::string(increasing ? "yes" : "no") +
                ", ratio band " + fmt(band) + "x";
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const ExperimentConfig& config,
                                            std::ostream& log) {
    config.validate();
    AcceptanceContext ctx(config);
    std::vector<CriterionResult> results;

    auto run = [&](auto&& fn) {
        auto t0 = Clock::now();
        CriterionResult r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.pass = false;
            r.details = std::string("exception: ") + e.what();
        }
        r.seconds = seconds_since(t0);
        log << "criterion " << r.id << (r.pass ? " PASS " : " FAIL ") << r.name << " ("
            << r.details << ") [" << fmt(r.seconds) << "s]\n";
        results.push_back(std::move(r));
    };

    run([&] { return c1_partition(ctx); });
    run([&] { return c2_reconstruction(ctx); });
    run([&] { return c3_norm_oracles(ctx); });
    run([&] { return c4_split_validity(ctx); });
    run([&] { return c5_paper_constants(); });
    run([&] { return c6_component_estimates(ctx); });
    run([&] { return c7_extension(ctx); });
    run([&] { return c8_stability(ctx); });
    run([&] { return c9_sharpness(ctx); });

    double total = 0.0;
    bool all = true;
    for (const auto& r : results) {
        total += r.seconds;
        all = all && r.pass;
    }
    CriterionResult end2end{10, "end-to-end selftest", all && total <= 120.0,
                            "criteria 1-9 in " + fmt(total) + "s (budget 120s)", total};
    log << "criterion 10 " << (end2end.pass ? "PASS " : "FAIL ") << end2end.name << " ("
        << end2end.details << ")\n";
    results.push_back(end2end);
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace paralog
