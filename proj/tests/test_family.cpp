#include <doctest.h>

#include <cmath>
#include <cstring>

#include "paralog/family.hpp"
#include "paralog/fft.hpp"
#include "paralog/grid.hpp"

using namespace paralog;

namespace {

GridSpec box(int n = 64) { return GridSpec::line(n, n, -4.0, 4.0, -16.0, 16.0, true); }

}  // namespace

TEST_CASE("member seeds are distinct and offsets give disjoint families") {
    std::uint64_t master = 1234;
    for (int i = 0; i < 100; ++i)
        for (int j = i + 1; j < 100; ++j)
            CHECK(member_seed(master, i) != member_seed(master, j));

    FamilySpec a;
    a.count = 4;
    a.master_seed = master;
    FamilySpec b = a;
    b.index_offset = 4;
    auto fa = generate_family(a, box(16));
    auto fb = generate_family(b, box(16));
    for (const auto& ma : fa)
        for (const auto& mb : fb) CHECK(ma.seed != mb.seed);
}

TEST_CASE("family kinds parse and print") {
    for (const char* name : {"trig-random", "bump", "lacunary", "heat-smoothed-noise",
                             "holder-rough"})
        CHECK(to_string(family_kind_from_string(name)) == name);
    CHECK_THROWS_AS(family_kind_from_string("nope"), std::invalid_argument);
}

TEST_CASE("every kind generates deterministic finite pairs") {
    for (auto kind : {FamilyKind::trig_random, FamilyKind::bump, FamilyKind::lacunary,
                      FamilyKind::heat_noise, FamilyKind::holder_rough}) {
        FamilySpec fam;
        fam.kind = kind;
        fam.count = 2;
        fam.master_seed = 77;
        auto x = generate_family(fam, box(32));
        auto y = generate_family(fam, box(32));
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(std::memcmp(x[i].f.values().data(), y[i].f.values().data(),
                              x[i].f.size() * sizeof(double)) == 0);
            CHECK(std::memcmp(x[i].g.values().data(), y[i].g.values().data(),
                              x[i].g.size() * sizeof(double)) == 0);
            CHECK(x[i].f.max_abs() > 0.0);
        }
        CHECK(std::memcmp(x[0].f.values().data(), x[1].f.values().data(),
                          x[0].f.size() * sizeof(double)) != 0);
    }
}

TEST_CASE("pairs satisfy f = dg/dx spectrally") {
    GridSpec spec = box(64);
    for (auto kind : {FamilyKind::trig_random, FamilyKind::lacunary, FamilyKind::heat_noise,
                      FamilyKind::holder_rough}) {
        FamilySpec fam;
        fam.kind = kind;
        fam.count = 1;
        fam.master_seed = 3;
        auto m = generate_family(fam, spec)[0];
        GridFunction df = spectral_derivative_x(m.g, 0);
        double scale = std::max(1.0, m.f.max_abs());
        double worst = 0.0;
        for (std::size_t i = 0; i < df.size(); ++i)
            worst = std::max(worst, std::fabs(df[i] - m.f[i]));
        CHECK(worst <= 1e-9 * scale);
    }
}

TEST_CASE("bump pairs vanish on the boundary ring and differentiate analytically") {
    GridSpec spec = box(64);
    FamilySpec fam;
    fam.kind = FamilyKind::bump;
    fam.count = 1;
    fam.master_seed = 9;
    auto m = generate_family(fam, spec)[0];
    const int nx = spec.shape[0], nt = spec.shape[1];
    for (int i = 0; i < nx; ++i) {
        CHECK(m.f[static_cast<std::size_t>(i)] == 0.0);                      // t edge
        CHECK(m.f[static_cast<std::size_t>(nt - 1) * nx + i] == 0.0);
    }
    for (int k = 0; k < nt; ++k) {
        CHECK(m.f[static_cast<std::size_t>(k) * nx] == 0.0);                 // x edge
        CHECK(m.f[static_cast<std::size_t>(k) * nx + nx - 1] == 0.0);
    }
    GridFunction df = spectral_derivative_x(m.g, 0);
    double worst = 0.0;
    for (std::size_t i = 0; i < df.size(); ++i)
        worst = std::max(worst, std::fabs(df[i] - m.f[i]));
    CHECK(worst <= 1e-6 * std::max(1.0, m.f.max_abs()));  // Gevrey-small aliasing tail
}

TEST_CASE("lacunary spectra sit on dyadic shells") {
    GridSpec spec = box(128);
    auto [g, f] = lacunary_pair(spec, 3, 1);
    auto spectrum = fft_of(f);
    fft_forward(spectrum, spec.shape);
    const int nx = spec.shape[0];
    std::vector<double> shell_mass(static_cast<std::size_t>(nx), 0.0);
    double total = 0.0;
    for (std::size_t flat = 0; flat < spectrum.size(); ++flat) {
        int kx = std::abs(signed_mode(static_cast<int>(flat % nx), nx));
        double e = std::norm(spectrum[flat]);
        shell_mass[static_cast<std::size_t>(kx)] += e;
        total += e;
    }
    double on_shells = shell_mass[2] + shell_mass[4] + shell_mass[8];
    CHECK(on_shells >= (1.0 - 1e-12) * total);

    CHECK_THROWS_AS(lacunary_pair(spec, 9, 1), std::invalid_argument);
}

TEST_CASE("band-limit certificate is tiny for every kind") {
    GridSpec spec = box(64);
    FilterBank bank = FilterBank::build(spec, BankMode::inhomogeneous);
    for (auto kind : {FamilyKind::trig_random, FamilyKind::bump, FamilyKind::lacunary,
                      FamilyKind::heat_noise, FamilyKind::holder_rough}) {
        FamilySpec fam;
        fam.kind = kind;
        fam.count = 1;
        fam.master_seed = 15;
        auto m = generate_family(fam, spec)[0];
        CHECK(high_gauge_energy_fraction(m.f, bank) <= 1e-8);
    }
}

TEST_CASE("rough family hits its target increment exponent") {
    GridSpec spec = box(256);
    FamilySpec fam;
    fam.kind = FamilyKind::holder_rough;
    fam.count = 1;
    fam.master_seed = 2024;
    fam.roughness = 0.5;
    auto m = generate_family(fam, spec)[0];

    // log-log slope of sup-increments over dyadic separations
    const int nx = spec.shape[0], nt = spec.shape[1];
    std::vector<double> ds{4, 8, 16, 32};
    std::vector<double> lx, ly;
    for (double dd : ds) {
        int d = static_cast<int>(dd);
        double worst = 0.0;
        for (int k = 0; k < nt; ++k)
            for (int i = 0; i + d < nx; ++i) {
                std::size_t p = static_cast<std::size_t>(k) * nx + i;
                worst = std::max(worst, std::fabs(m.f[p + static_cast<std::size_t>(d)] -
                                                  m.f[p]));
            }
        lx.push_back(std::log(d * spec.spacing(0)));
        ly.push_back(std::log(worst));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    double slope = num / den;
    CHECK(std::fabs(slope - fam.roughness) <= 0.1);
}

TEST_CASE("omega generators are deterministic") {
    GridSpec omega = GridSpec::line(32, 32, 0, 1, 0, 1, false);
    GridFunction a = generate_omega_function(FamilyKind::trig_random, 5, omega);
    GridFunction b = generate_omega_function(FamilyKind::trig_random, 5, omega);
    CHECK(std::memcmp(a.values().data(), b.values().data(),
                      a.size() * sizeof(double)) == 0);
    GridFunction c = generate_omega_function(FamilyKind::trig_random, 6, omega);
    CHECK(std::memcmp(a.values().data(), c.values().data(),
                      a.size() * sizeof(double)) != 0);
}
