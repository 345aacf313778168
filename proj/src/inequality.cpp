#include "paralog/inequality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "paralog/family.hpp"

namespace paralog {

std::pair<double, double> paper_constants(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("paper_constants: gamma must lie strictly in (0,1)");
    double c = std::sqrt(1.0 / (std::exp2(2.0 * gamma) - 1.0));
    double cp = std::exp2(-gamma) / (1.0 - std::exp2(-gamma));
    return {c, cp};
}

namespace {

double safe_ratio(double num, double den) {
    if (den > 0.0) return num / den;
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

std::string grid_string(const GridSpec& spec) {
    std::string s;
    for (std::size_t a = 0; a < spec.shape.size(); ++a)
        s += (a ? "x" : "") + std::to_string(spec.shape[a]);
    return s;
}

}  // namespace

SplitContext::SplitContext(const GridFunction& f, const GridFunction& g,
                           const FilterBank& bank) {
    if (bank.mode() != BankMode::homogeneous)
        throw std::invalid_argument("SplitContext: homogeneous bank required");
    if (!f.spec().same_lattice(g.spec()))
        throw std::invalid_argument("SplitContext: f and g grids differ");

    j_min_ = bank.j_min();
    j_max_ = bank.j_max();
    total_ = f.size();
    f_sup_ = f.max_abs();
    g_sup_ = g.max_abs();
    mean_residual_ = std::fabs(f.mean());

    auto decomp = decompose(f, bank);
    for (auto& b : decomp.blocks) {
        block_sups_.push_back(b.sup);
        auto vals = b.values.values();
        block_values_.emplace_back(vals.begin(), vals.end());
    }
}

double SplitContext::level_sup(int j) const {
    if (j < j_min_ || j > j_max_)
        throw std::out_of_range("SplitContext: level outside resolvable range");
    return block_sups_[static_cast<std::size_t>(j - j_min_)];
}

namespace {

double sup_sqrt(const std::vector<double>& acc) {
    double m = 0.0;
    for (double v : acc) m = std::max(m, v);
    return std::sqrt(m);
}

}  // namespace

SplitEstimate SplitContext::estimate(double gamma, int n, const SplitNorms& norms) const {
    if (n < 0) throw std::invalid_argument("split estimate: N must be nonnegative");
    std::array<int, 1> range{n};
    return table(gamma, range, norms).front();
}

std::vector<SplitEstimate> SplitContext::table(double gamma, std::span<const int> n_range,
                                               const SplitNorms& norms) const {
    if (n_range.empty()) throw std::invalid_argument("split table: empty N range");
    int n_max = 0;
    for (int n : n_range) {
        if (n < 0) throw std::invalid_argument("split table: N must be nonnegative");
        n_max = std::max(n_max, n);
    }
    auto [c_g, c_gp] = paper_constants(gamma);

    const int n_levels = j_max_ - j_min_ + 1;

    // A1 by ascending prefix: after adding level j the sup certifies the set
    // {j' <= j}; A1(N) reads the prefix at j = -N-1.
    std::vector<double> sup1(static_cast<std::size_t>(n_levels), 0.0);
    {
        std::vector<double> acc(total_, 0.0);
        for (int j = j_min_; j <= j_max_; ++j) {
            const auto& bv = block_values_[static_cast<std::size_t>(j - j_min_)];
            const double w2 = std::exp2(-2.0 * gamma * j);
            for (std::size_t i = 0; i < total_; ++i) acc[i] += w2 * bv[i] * bv[i];
            sup1[static_cast<std::size_t>(j - j_min_)] = sup_sqrt(acc);
        }
    }

    // A2 by widening the window [-N, N] one notch per step.
    std::vector<double> sup2(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<int> count2(static_cast<std::size_t>(n_max) + 1, 0);
    {
        std::vector<double> acc(total_, 0.0);
        int used = 0;
        for (int n = 0; n <= n_max; ++n) {
            auto add_level = [&](int j) {
                if (j < j_min_ || j > j_max_) return;
                const auto& bv = block_values_[static_cast<std::size_t>(j - j_min_)];
                for (std::size_t i = 0; i < total_; ++i) acc[i] += bv[i] * bv[i];
                ++used;
            };
            add_level(n);
            if (n > 0) add_level(-n);
            sup2[static_cast<std::size_t>(n)] = sup_sqrt(acc);
            count2[static_cast<std::size_t>(n)] = used;
        }
    }

    // A3 suffix maxima of the weighted level sups.
    std::vector<double> suf3(static_cast<std::size_t>(n_levels) + 1, 0.0);
    for (int j = j_max_; j >= j_min_; --j)
        suf3[static_cast<std::size_t>(j - j_min_)] =
            std::max(std::exp2(gamma * j) * block_sups_[static_cast<std::size_t>(j - j_min_)],
                     suf3[static_cast<std::size_t>(j - j_min_) + 1]);

    std::vector<SplitEstimate> out;
    out.reserve(n_range.size());
    for (int n : n_range) {
        SplitEstimate e;
        e.n_level = n;
        e.c_gamma = c_g;
        e.c_gamma_prime = c_gp;
        e.lhs = f_sup_;
        e.mean_residual = mean_residual_;

        int j1 = -n - 1;  // top of A1's level set
        if (j1 >= j_min_) {
            e.a1 = sup1[static_cast<std::size_t>(std::min(j1, j_max_) - j_min_)];
            e.a1_levels = std::min(j1, j_max_) - j_min_ + 1;
        }
        e.a2 = sup2[static_cast<std::size_t>(n)];
        e.a2_levels = count2[static_cast<std::size_t>(n)];
        int j3 = std::max(n + 1, j_min_);  // bottom of A3's level set
        if (j3 <= j_max_) {
            e.a3 = suf3[static_cast<std::size_t>(j3 - j_min_)];
            e.a3_levels = j_max_ - j3 + 1;
        }

        const double damp = std::exp2(-gamma * n);
        e.bound = c_g * damp * e.a1 + std::sqrt(2.0 * n + 1.0) * e.a2 + c_gp * damp * e.a3;
        e.ratio_a1_gsup = safe_ratio(e.a1, g_sup_);
        e.ratio_a2_bmo = safe_ratio(e.a2, norms.f_bmo);
        e.ratio_a3_holder = safe_ratio(e.a3, norms.f_holder);
        out.push_back(e);
    }
    return out;
}

SplitEstimate split_bound(const GridFunction& f, const GridFunction& g,
                          const FilterBank& bank, double gamma, int n) {
    SplitContext ctx(f, g, bank);
    SplitNorms norms{bmo_norm(f).value, holder_norm(f, gamma).total};
    return ctx.estimate(gamma, n, norms);
}

OptimizeResult optimize_N(const GridFunction& f, const GridFunction& g,
                          const FilterBank& bank, double gamma,
                          std::span<const int> n_range) {
    SplitContext ctx(f, g, bank);
    SplitNorms norms{bmo_norm(f).value, holder_norm(f, gamma).total};
    OptimizeResult res;
    res.table = ctx.table(gamma, n_range, norms);
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.table.size(); ++i) {
        bool better = res.table[i].bound < res.table[best].bound ||
                      (res.table[i].bound == res.table[best].bound &&
                       res.table[i].n_level < res.table[best].n_level);
        if (better) best = i;
    }
    res.n_star = res.table[best].n_level;
    res.best = res.table[best];
    return res;
}

namespace {

// argmin of the bound; ascending iteration keeps the first minimum, so ties
// break toward smaller N.
std::size_t argmin_bound(const std::vector<SplitEstimate>& tab) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < tab.size(); ++i)
        if (tab[i].bound < tab[best].bound) best = i;
    return best;
}

}  // namespace

Theorem1Analysis::Theorem1Analysis(GridFunction g, GridFunction f,
                                   const FilterBank& hom_bank,
                                   const FilterBank& inh_bank)
    : g_(std::move(g)), f_(std::move(f)), ctx_(f_, g_, hom_bank) {
    inh_sups_ = level_sups(decompose(f_, inh_bank));
    bmo_ = bmo_norm(f_).value;
    l1_ = lp_norm(f_, 1);
}

VerificationReport Theorem1Analysis::report(double gamma, std::span<const int> n_range,
                                            std::vector<SplitEstimate>* table_out) const {
    VerificationReport r;
    r.theorem = 1;
    r.gamma = gamma;
    r.grid = grid_string(g_.spec());
    r.lhs = ctx_.f_sup();
    r.bmo = bmo_;
    r.holder = holder_norm(f_, gamma).total;
    r.g_sup = ctx_.g_sup();
    r.l1 = l1_;
    r.rhs_factor = 1.0 + r.bmo * std::sqrt(log_plus(r.holder + r.g_sup));
    r.implied_c = r.lhs / r.rhs_factor;

    auto tab = ctx_.table(gamma, n_range, SplitNorms{r.bmo, r.holder});
    std::size_t best = argmin_bound(tab);
    r.n_star = tab[best].n_level;
    r.a1 = tab[best].a1;
    r.a2 = tab[best].a2;
    r.a3 = tab[best].a3;
    if (table_out) *table_out = std::move(tab);

    BesovResult bes = besov_from_sups(inh_sups_, gamma);
    r.besov = bes.value;
    r.besov_level = bes.argmax_level;
    return r;
}

VerificationReport verify_theorem1(const GridFunction& g, const FilterBank& hom_bank,
                                   const FilterBank& inh_bank, double gamma,
                                   std::span<const int> n_range) {
    GridFunction f = spectral_derivative_x(g, 0);
    return Theorem1Analysis(g, std::move(f), hom_bank, inh_bank).report(gamma, n_range);
}

Theorem2Analysis::Theorem2Analysis(GridFunction f, const ExtensionLayout& layout,
                                   const FilterBank& big_hom_bank,
                                   const FilterBank& big_inh_bank)
    : f_(std::move(f)),
      layout_(layout),
      big_(extend(f_, layout, big_hom_bank.spec()).extended),
      big0_(big_.spec(),
            [&] {
                double mean = big_.mean();
                std::vector<double> v(big_.values().begin(), big_.values().end());
                for (double& x : v) x -= mean;
                return v;
            }(),
            "mean-free " + big_.label()),
      g_chain_(antiderivative_x(big_, 0, 0.0)),
      ctx_(big0_, g_chain_, big_hom_bank) {
    inh_sups_ = level_sups(decompose(big0_, big_inh_bank));
    bmo_in_ = bmo_norm(f_).value;
    bmo_out_ = bmo_norm(big_).value;
    l1_ = lp_norm(f_, 1);
    mean_removed_ = std::fabs(big_.mean());
    extension_sup_ = big_.max_abs();
}

VerificationReport Theorem2Analysis::report(double gamma, std::span<const int> n_range,
                                            std::vector<SplitEstimate>* table_out) const {
    VerificationReport r;
    r.theorem = 2;
    r.gamma = gamma;
    r.T = layout_.T;
    r.grid = grid_string(f_.spec());

    HolderReport hol_in = holder_norm(f_, gamma);
    r.lhs = hol_in.sup_norm;
    r.bmo = bmo_in_;
    r.l1 = l1_;
    r.holder = hol_in.total;
    r.rhs_factor = 1.0 + (r.bmo + r.l1) * std::sqrt(log_plus(r.holder));
    r.implied_c = r.lhs / r.rhs_factor;

    r.extension_sup = extension_sup_;
    double hol_out = holder_norm(big_, gamma).total;
    r.claim_h_ratio = r.holder > 0.0 ? hol_out / r.holder : 1.0;
    double transfer_den = r.bmo + r.l1;
    r.bmo_transfer_ratio =
        transfer_den > 0.0 ? bmo_out_ / transfer_den : (bmo_out_ == 0.0 ? 1.0 : 0.0);
    r.g_sup = g_chain_.max_abs();
    r.g_sup_ratio = safe_ratio(r.g_sup, r.holder);
    r.mean_removed = mean_removed_;

    auto tab = ctx_.table(gamma, n_range, SplitNorms{bmo_out_, hol_out});
    std::size_t best = argmin_bound(tab);
    r.n_star = tab[best].n_level;
    r.a1 = tab[best].a1;
    r.a2 = tab[best].a2;
    r.a3 = tab[best].a3;
    if (table_out) *table_out = std::move(tab);

    BesovResult bes = besov_from_sups(inh_sups_, gamma);
    r.besov = bes.value;
    r.besov_level = bes.argmax_level;
    return r;
}

VerificationReport verify_theorem2(const GridFunction& f, double gamma,
                                   const ExtensionLayout& layout,
                                   const FilterBank& big_hom_bank,
                                   const FilterBank& big_inh_bank,
                                   std::span<const int> n_range) {
    return Theorem2Analysis(f, layout, big_hom_bank, big_inh_bank)
        .report(gamma, n_range);
}

std::vector<SharpnessRow> sharpness_probe(std::span<const int> m_range,
                                          const FilterBank& bank, double gamma) {
    if (m_range.empty()) throw std::invalid_argument("sharpness_probe: empty M range");
    std::vector<SharpnessRow> rows;
    for (int m : m_range) {
        auto [g, f] = lacunary_pair(bank.spec(), m, 1);
        SharpnessRow row;
        row.m = m;
        row.linf = f.max_abs();
        row.bmo = bmo_norm(f).value;
        row.holder = holder_norm(f, gamma).total;
        row.ratio = row.linf / (row.bmo * std::sqrt(log_plus(row.holder)));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace paralog
