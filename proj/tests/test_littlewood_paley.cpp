#include <doctest.h>

#include <cmath>

#include "paralog/family.hpp"
#include "paralog/fft.hpp"
#include "paralog/littlewood_paley.hpp"
#include "paralog/norms.hpp"

using namespace paralog;

namespace {

GridSpec box(int n = 64) { return GridSpec::line(n, n, -4.0, 4.0, -16.0, 16.0, true); }

}  // namespace

TEST_CASE("theta profile plateau and support") {
    CHECK(theta_profile(0.0) == 1.0);
    CHECK(theta_profile(1.0) == 1.0);
    CHECK(theta_profile(2.0) == 0.0);
    CHECK(theta_profile(5.0) == 0.0);
    double mid = theta_profile(1.5);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    CHECK(smooth_step(0.25) + smooth_step(0.75) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("filter bank construction") {
    CHECK_THROWS_AS(FilterBank::build(GridSpec::line(16, 16, 0, 1, 0, 1, false),
                                      BankMode::homogeneous),
                    std::invalid_argument);
    FilterBank hom = FilterBank::build(box(), BankMode::homogeneous);
    CHECK(hom.j_min() < 0);
    CHECK(hom.j_max() > 2);
    CHECK_FALSE(hom.has_low_pass());
    FilterBank inh = FilterBank::build(box(), BankMode::inhomogeneous);
    CHECK(inh.j_min() == 0);
    CHECK(inh.has_low_pass());
}

TEST_CASE("partition of unity telescopes on the lattice") {
    for (int n : {64, 128}) {
        for (auto mode : {BankMode::homogeneous, BankMode::inhomogeneous}) {
            FilterBank bank = FilterBank::build(box(n), mode);
            PartitionReport rep = partition_residual(bank);
            CHECK(rep.max_residual_covered <= 1e-10);
        }
    }
}

TEST_CASE("multipliers live on their annuli") {
    FilterBank bank = FilterBank::build(box(), BankMode::homogeneous);
    const auto& rho = bank.gauges();
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        const auto& lvl = bank.level(j);
        for (std::size_t k = 0; k < lvl.idx.size(); ++k) {
            double r = rho[lvl.idx[k]];
            CHECK(r >= std::ldexp(1.0, j) * (1.0 - 1e-12));
            CHECK(r <= std::ldexp(1.0, j + 2) * (1.0 + 1e-12));
        }
    }
    FilterBank inh = FilterBank::build(box(), BankMode::inhomogeneous);
    for (std::size_t k = 0; k < inh.low_pass().idx.size(); ++k)
        CHECK(rho[inh.low_pass().idx[k]] <= 2.0);
}

TEST_CASE("blocks act diagonally on single modes") {
    GridSpec spec = box();
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    // one spatial mode: f(x) = cos(2 pi k x / L)
    const int k = 5;
    GridFunction f = sample(
        [&](std::span<const double> x, double) {
            return std::cos(2.0 * M_PI * k * (x[0] - spec.lo[0]) / spec.length(0));
        },
        spec, "single mode");
    // flat index of the (+k, 0) lattice point
    std::size_t flat = static_cast<std::size_t>(k);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        double m = bank.level(j).value_at(static_cast<std::uint32_t>(flat));
        GridFunction block = lp_block(f, bank, j);
        double err = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            err = std::max(err, std::fabs(block[i] - m * f[i]));
        CHECK(err <= 1e-10);
    }
}

TEST_CASE("zero and constant functions decompose trivially") {
    GridSpec spec = box();
    FilterBank inh = FilterBank::build(spec, BankMode::inhomogeneous);
    GridFunction zero = sample([](std::span<const double>, double) { return 0.0; }, spec);
    auto dz = decompose(zero, inh);
    for (const auto& b : dz.blocks) CHECK(b.sup == 0.0);

    GridFunction c = sample([](std::span<const double>, double) { return 2.5; }, spec);
    auto dc = decompose(c, inh);
    for (const auto& b : dc.blocks) {
        if (b.low_pass)
            CHECK(std::fabs(b.sup - 2.5) <= 1e-12);
        else
            CHECK(b.sup <= 1e-12);
    }
}

TEST_CASE("reconstruction: inhomogeneous exact, homogeneous modulo the mean") {
    GridSpec spec = box();
    FilterBank inh = FilterBank::build(spec, BankMode::inhomogeneous);
    FilterBank hom = FilterBank::build(spec, BankMode::homogeneous);
    FamilySpec fam;
    fam.count = 5;
    fam.master_seed = 12;
    auto members = generate_family(fam, spec);
    for (const auto& m : members) {
        const GridFunction& f = m.f;
        double scale = f.max_abs();
        GridFunction ri = reconstruct(decompose(f, inh));
        double err = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            err = std::max(err, std::fabs(ri[i] - f[i]));
        CHECK(err <= 1e-8 * scale);

        double mean = f.mean();
        GridFunction rh = reconstruct(decompose(f, hom));
        err = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            err = std::max(err, std::fabs(rh[i] - (f[i] - mean)));
        CHECK(err <= 1e-8 * scale);
    }

    GridFunction c = sample([](std::span<const double>, double) { return 1.5; }, spec);
    GridFunction rc = reconstruct(decompose(c, hom));
    CHECK(rc.max_abs() <= 1e-12);  // constants are the unrecoverable part

    CHECK_THROWS_AS(reconstruct(BlockDecomposition{}), std::invalid_argument);
}

TEST_CASE("besov norm of constants and the argmax level ladder") {
    GridSpec spec = box(128);
    FilterBank inh = FilterBank::build(spec, BankMode::inhomogeneous);
    GridFunction c = sample([](std::span<const double>, double) { return -3.0; }, spec);
    BesovResult bc = besov_norm(c, inh, 0.5);
    CHECK(bc.value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(bc.argmax_level == 0);

    GridFunction zero = sample([](std::span<const double>, double) { return 0.0; }, spec);
    CHECK(besov_norm(zero, inh, 0.5).value == 0.0);

    // cos(2^k w0 x) * window: the argmax level steps with k
    int prev_level = -1;
    for (int k = 2; k <= 5; ++k) {
        GridFunction f = sample(
            [&](std::span<const double> x, double t) {
                double w0 = 2.0 * M_PI / spec.length(0);
                return std::cos(std::ldexp(w0, k) * x[0]) * time_window(spec, t, 4);
            },
            spec, "mode ladder");
        BesovResult b = besov_norm(f, inh, 0.5);
        if (prev_level >= 0) CHECK(b.argmax_level == prev_level + 1);
        prev_level = b.argmax_level;
    }

    FilterBank hom = FilterBank::build(spec, BankMode::homogeneous);
    CHECK_THROWS_AS(besov_norm(c, hom, 0.5), std::invalid_argument);
}

TEST_CASE("square function composes weighted block moduli") {
    GridSpec spec = box();
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    FamilySpec fam;
    fam.count = 1;
    fam.master_seed = 3;
    auto f = generate_family(fam, spec)[0].f;

    std::vector<int> one_level{2};
    GridFunction sq = square_function(f, bank, one_level, 0.0);
    GridFunction block = lp_block(f, bank, 2);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(sq[i] == doctest::Approx(std::fabs(block[i])).epsilon(1e-13));

    GridFunction zero = sample([](std::span<const double>, double) { return 0.0; }, spec);
    CHECK(square_function(zero, bank, one_level, -0.5).max_abs() == 0.0);

    CHECK_THROWS_AS(square_function(f, bank, std::vector<int>{}, 0.0),
                    std::invalid_argument);
}

TEST_CASE("square function of two disjoint modes is the root sum of squares") {
    GridSpec spec = box(128);
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    auto mode = [&](int k) {
        return sample(
            [&](std::span<const double> x, double) {
                return std::cos(2.0 * M_PI * k * (x[0] - spec.lo[0]) / spec.length(0));
            },
            spec, "mode " + std::to_string(k));
    };
    GridFunction a = mode(2), b = mode(32);
    std::vector<double> sum(a.values().begin(), a.values().end());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += b[i];
    GridFunction f(spec, sum, "two modes");

    std::vector<int> levels;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) levels.push_back(j);
    GridFunction sq = square_function(f, bank, levels, 0.0);
    GridFunction sqa = square_function(a, bank, levels, 0.0);
    GridFunction sqb = square_function(b, bank, levels, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i) {
        double want = std::sqrt(sqa[i] * sqa[i] + sqb[i] * sqb[i]);
        worst = std::max(worst, std::fabs(sq[i] - want));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("blocks are linear") {
    GridSpec spec = box();
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    FamilySpec fam;
    fam.count = 2;
    fam.master_seed = 21;
    auto mem = generate_family(fam, spec);
    std::vector<double> combo(mem[0].f.values().begin(), mem[0].f.values().end());
    for (std::size_t i = 0; i < combo.size(); ++i)
        combo[i] = 1.5 * combo[i] + 0.5 * mem[1].f[i];
    GridFunction f(spec, combo, "combo");
    int j = std::min(3, bank.j_max());
    GridFunction bf = lp_block(f, bank, j);
    GridFunction b0 = lp_block(mem[0].f, bank, j);
    GridFunction b1 = lp_block(mem[1].f, bank, j);
    double scale = std::max(1.0, bf.max_abs());
    for (std::size_t i = 0; i < combo.size(); ++i)
        CHECK(std::fabs(bf[i] - (1.5 * b0[i] + 0.5 * b1[i])) <= 1e-12 * scale);
}

TEST_CASE("block spectra stay inside their annuli") {
    GridSpec spec = box();
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    FamilySpec fam;
    fam.count = 1;
    fam.master_seed = 9;
    auto f = generate_family(fam, spec)[0].f;
    const auto& rho = bank.gauges();
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        GridFunction block = lp_block(f, bank, j);
        auto spectrum = fft_of(block);
        fft_forward(spectrum, spec.shape);
        double inside = 0.0, outside = 0.0;
        for (std::size_t i = 0; i < spectrum.size(); ++i) {
            double e = std::norm(spectrum[i]);
            bool in_annulus = rho[i] >= std::ldexp(1.0, j) * (1 - 1e-12) &&
                              rho[i] <= std::ldexp(1.0, j + 2) * (1 + 1e-12);
            (in_annulus ? inside : outside) += e;
        }
        if (inside + outside > 0.0) CHECK(outside <= 1e-10 * (inside + outside));
    }
}
