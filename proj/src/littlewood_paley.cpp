#include "paralog/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "paralog/fft.hpp"

namespace paralog {

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

double theta_profile(double rho) { return smooth_step(2.0 - rho); }

double SparseMultiplier::value_at(std::uint32_t flat) const {
    auto it = std::lower_bound(idx.begin(), idx.end(), flat);
    if (it == idx.end() || *it != flat) return 0.0;
    return val[static_cast<std::size_t>(it - idx.begin())];
}

namespace {

std::vector<double> lattice_gauges(const GridSpec& spec) {
    std::vector<std::vector<double>> freq(spec.rank());
    for (int a = 0; a < spec.rank(); ++a) {
        freq[a].resize(static_cast<std::size_t>(spec.shape[a]));
        for (int i = 0; i < spec.shape[a]; ++i)
            freq[a][static_cast<std::size_t>(i)] = lattice_frequency(spec, a, i);
    }
    std::vector<double> rho(spec.node_count());
    std::vector<int> idx(spec.rank(), 0);
    std::vector<double> x(spec.n);
    std::size_t flat = 0;
    for (;;) {
        for (int a = 0; a < spec.n; ++a) x[a] = freq[a][static_cast<std::size_t>(idx[a])];
        double t = freq[spec.time_axis()][static_cast<std::size_t>(idx[spec.time_axis()])];
        rho[flat++] = quasi_norm(x, t);
        int a = 0;
        while (a < spec.rank() && ++idx[a] == spec.shape[a]) idx[a++] = 0;
        if (a == spec.rank()) break;
    }
    return rho;
}

double level_multiplier(double rho, int j) {
    return theta_profile(std::ldexp(rho, -(j + 1))) - theta_profile(std::ldexp(rho, -j));
}

}  // namespace

FilterBank FilterBank::build(const GridSpec& spec, BankMode mode) {
    spec.validate();
    if (!spec.periodic)
        throw std::invalid_argument("FilterBank: periodic grid required");

    FilterBank bank;
    bank.spec_ = spec;
    bank.mode_ = mode;
    bank.rho_ = lattice_gauges(spec);

    double rho_min = 0.0, rho_max = 0.0;
    for (double r : bank.rho_) {
        if (r > 0.0 && (rho_min == 0.0 || r < rho_min)) rho_min = r;
        rho_max = std::max(rho_max, r);
    }
    if (rho_min == 0.0)
        throw std::invalid_argument("FilterBank: grid too small to host an annulus");
    bank.rho_min_ = rho_min;
    bank.rho_max_ = rho_max;

    // Coarsest level must have theta(A^{-j_min} xi) = 0 on every nonzero
    // lattice mode, the finest must reach the Nyquist gauge.
    int j_min = static_cast<int>(std::floor(std::log2(rho_min))) - 1;
    int j_max = static_cast<int>(std::ceil(std::log2(rho_max))) - 1;
    if (mode == BankMode::inhomogeneous) j_min = 0;
    if (j_max < j_min) j_max = j_min;
    bank.j_min_ = j_min;
    bank.j_max_ = j_max;
    bank.levels_.resize(static_cast<std::size_t>(j_max - j_min + 1));

    const std::size_t total = bank.rho_.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
        const double rho = bank.rho_[flat];
        if (mode == BankMode::inhomogeneous && rho < 2.0) {
            double v = theta_profile(rho);
            if (v > 0.0) {
                bank.theta_.idx.push_back(static_cast<std::uint32_t>(flat));
                bank.theta_.val.push_back(v);
            }
        }
        if (rho <= 0.0) continue;
        // m_j is nonzero only for 2^j < rho < 2^{j+2}; probe the candidates.
        const int fl = static_cast<int>(std::floor(std::log2(rho)));
        for (int j = fl - 2; j <= fl + 1; ++j) {
            if (j < j_min || j > j_max) continue;
            double v = level_multiplier(rho, j);
            if (v > 0.0) {
                auto& lvl = bank.levels_[static_cast<std::size_t>(j - j_min)];
                lvl.idx.push_back(static_cast<std::uint32_t>(flat));
                lvl.val.push_back(v);
            }
        }
    }
    return bank;
}

const SparseMultiplier& FilterBank::level(int j) const {
    if (j < j_min_ || j > j_max_)
        throw std::out_of_range("FilterBank: level outside resolvable range");
    return levels_[static_cast<std::size_t>(j - j_min_)];
}

const SparseMultiplier& FilterBank::low_pass() const {
    if (!has_low_pass())
        throw std::logic_error("FilterBank: homogeneous bank has no low pass");
    return theta_;
}

PartitionReport partition_residual(const FilterBank& bank) {
    const auto& rho = bank.gauges();
    std::vector<double> acc(rho.size(), 0.0);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        const auto& lvl = bank.level(j);
        for (std::size_t k = 0; k < lvl.idx.size(); ++k) acc[lvl.idx[k]] += lvl.val[k];
    }
    if (bank.has_low_pass()) {
        const auto& th = bank.low_pass();
        for (std::size_t k = 0; k < th.idx.size(); ++k) acc[th.idx[k]] += th.val[k];
    }

    PartitionReport rep;
    if (bank.mode() == BankMode::homogeneous) {
        rep.rho_covered_lo = std::ldexp(1.0, bank.j_min() + 1);
        rep.rho_covered_hi = std::ldexp(1.0, bank.j_max() + 1);
    } else {
        rep.rho_covered_lo = 0.0;
        rep.rho_covered_hi = std::ldexp(1.0, bank.j_max() + 1);
    }
    for (std::size_t i = 0; i < rho.size(); ++i) {
        bool covered = rho[i] >= rep.rho_covered_lo && rho[i] <= rep.rho_covered_hi;
        if (bank.mode() == BankMode::homogeneous && rho[i] == 0.0) covered = false;
        double res = std::fabs(acc[i] - 1.0);
        if (covered)
            rep.max_residual_covered = std::max(rep.max_residual_covered, res);
        else
            rep.max_residual_outside = std::max(rep.max_residual_outside, res);
    }
    return rep;
}

namespace {

GridFunction apply_multiplier(const std::vector<std::complex<double>>& spectrum,
                              const SparseMultiplier& m, const GridSpec& spec,
                              double scale, const std::string& label) {
    std::vector<std::complex<double>> buf(spectrum.size(), std::complex<double>(0, 0));
    for (std::size_t k = 0; k < m.idx.size(); ++k)
        buf[m.idx[k]] = spectrum[m.idx[k]] * m.val[k];
    fft_inverse(buf, spec.shape);
    return real_part(spec, buf, label, scale);
}

}  // namespace

BlockDecomposition decompose(const GridFunction& f, const FilterBank& bank) {
    if (!f.spec().same_lattice(bank.spec()))
        throw std::invalid_argument("decompose: function and bank grids differ");
    auto spectrum = fft_of(f);
    fft_forward(spectrum, f.spec().shape);
    const double scale = f.max_abs();

    BlockDecomposition out;
    out.mode = bank.mode();
    if (bank.has_low_pass()) {
        Block b{0, true,
                apply_multiplier(spectrum, bank.low_pass(), f.spec(), scale,
                                 "theta block of " + f.label()),
                0.0};
        b.sup = b.values.max_abs();
        out.blocks.push_back(std::move(b));
    }
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        Block b{j, false,
                apply_multiplier(spectrum, bank.level(j), f.spec(), scale,
                                 "block j=" + std::to_string(j) + " of " + f.label()),
                0.0};
        b.sup = b.values.max_abs();
        out.blocks.push_back(std::move(b));
    }
    return out;
}

GridFunction lp_block(const GridFunction& f, const FilterBank& bank, int j) {
    if (!f.spec().same_lattice(bank.spec()))
        throw std::invalid_argument("lp_block: function and bank grids differ");
    auto spectrum = fft_of(f);
    fft_forward(spectrum, f.spec().shape);
    return apply_multiplier(spectrum, bank.level(j), f.spec(), f.max_abs(),
                            "block j=" + std::to_string(j) + " of " + f.label());
}

GridFunction lp_low_pass_block(const GridFunction& f, const FilterBank& bank) {
    if (!f.spec().same_lattice(bank.spec()))
        throw std::invalid_argument("lp_block: function and bank grids differ");
    auto spectrum = fft_of(f);
    fft_forward(spectrum, f.spec().shape);
    return apply_multiplier(spectrum, bank.low_pass(), f.spec(), f.max_abs(),
                            "theta block of " + f.label());
}

GridFunction reconstruct(const BlockDecomposition& decomp) {
    if (decomp.blocks.empty())
        throw std::invalid_argument("reconstruct: empty decomposition");
    const GridSpec& spec = decomp.blocks.front().values.spec();
    std::vector<double> sum(spec.node_count(), 0.0);
    for (const auto& b : decomp.blocks) {
        auto vals = b.values.values();
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += vals[i];
    }
    return GridFunction(spec, std::move(sum), "reconstruction");
}

BesovResult besov_norm(const GridFunction& f, const FilterBank& bank, double gamma) {
    if (!bank.has_low_pass())
        throw std::invalid_argument("besov_norm: inhomogeneous bank required");
    return besov_from_blocks(decompose(f, bank), gamma);
}

BesovResult besov_from_blocks(const BlockDecomposition& decomp, double gamma) {
    if (decomp.mode != BankMode::inhomogeneous)
        throw std::invalid_argument("besov_from_blocks: inhomogeneous decomposition required");
    return besov_from_sups(level_sups(decomp), gamma);
}

std::vector<LevelSup> level_sups(const BlockDecomposition& decomp) {
    std::vector<LevelSup> out;
    out.reserve(decomp.blocks.size());
    for (const auto& b : decomp.blocks) out.push_back({b.level, b.low_pass, b.sup});
    return out;
}

BesovResult besov_from_sups(std::span<const LevelSup> sups, double gamma) {
    BesovResult out;
    for (const auto& s : sups) {
        double weighted;
        int label;
        if (s.low_pass) {
            weighted = s.sup;
            label = 0;
        } else if (s.level >= 1) {
            weighted = std::exp2(gamma * s.level) * s.sup;
            label = s.level;
        } else {
            continue;  // the bridging j=0 level is reconstruction-only
        }
        if (weighted > out.value) {
            out.value = weighted;
            out.argmax_level = label;
        }
    }
    return out;
}

GridFunction square_function(const GridFunction& f, const FilterBank& bank,
                             std::span<const int> levels, double weight_exponent) {
    if (levels.empty())
        throw std::invalid_argument("square_function: empty level set");
    if (!f.spec().same_lattice(bank.spec()))
        throw std::invalid_argument("square_function: function and bank grids differ");

    auto spectrum = fft_of(f);
    fft_forward(spectrum, f.spec().shape);
    const double scale = f.max_abs();

    std::vector<double> acc(f.size(), 0.0);
    for (int j : levels) {
        GridFunction block = apply_multiplier(spectrum, bank.level(j), f.spec(), scale,
                                              "sq block j=" + std::to_string(j));
        const double w = std::exp2(weight_exponent * j);
        auto vals = block.values();
        for (std::size_t i = 0; i < acc.size(); ++i) {
            double wv = w * vals[i];
            acc[i] += wv * wv;
        }
    }
    for (double& v : acc) v = std::sqrt(v);
    return GridFunction(f.spec(), std::move(acc), "square function of " + f.label());
}

}  // namespace paralog
