#include <doctest.h>

#include <cmath>

#include "paralog/extension.hpp"
#include "paralog/family.hpp"

using namespace paralog;

namespace {

GridSpec omega_grid(int n, double T) { return GridSpec::line(n, n, 0, 1, 0, T, false); }

}  // namespace

TEST_CASE("layout zones for T = 1") {
    ExtensionLayout l = ExtensionLayout::make(1.0);
    CHECK(l.omega.lo == std::vector<double>{0.0, 0.0});
    CHECK(l.omega.hi == std::vector<double>{1.0, 1.0});
    CHECK(l.omega_tilde.lo == std::vector<double>{-1.0, -1.0});
    CHECK(l.omega_tilde.hi == std::vector<double>{2.0, 2.0});
    CHECK(l.z1.lo == std::vector<double>{-0.25, -0.25});
    CHECK(l.z1.hi == std::vector<double>{1.25, 1.25});
    CHECK(l.z2.lo == std::vector<double>{-0.75, -0.75});
    CHECK(l.z2.hi == std::vector<double>{1.75, 1.75});
    CHECK_THROWS_AS(ExtensionLayout::make(0.0), std::invalid_argument);
}

TEST_CASE("index folding clamps only the unsampled closure lines") {
    const int n = 8;
    CHECK(fold_index(n, n) == 0);          // x = 0 maps to itself
    CHECK(fold_index(n + 3, n) == 3);      // interior identity
    CHECK(fold_index(n - 2, n) == 2);      // left reflection
    CHECK(fold_index(2 * n + 3, n) == n - 3);  // right reflection about x = 1
    CHECK(fold_index(0, n) == n - 1);      // clamp at x = -1
    CHECK(fold_index(2 * n, n) == n - 1);  // clamp at x = 1
}

TEST_CASE("reflection matches the even-extension formulas") {
    const double T = 1.0;
    GridSpec og = omega_grid(16, T);
    ExtensionLayout layout = ExtensionLayout::make(T);

    GridFunction fx = sample([](std::span<const double> x, double) { return x[0]; }, og);
    GridFunction rx = reflect(fx, layout);
    const GridSpec& rs = rx.spec();
    // x = -0.25 lies at tripled index 12; its preimage is x = 0.25
    int a = 12;
    REQUIRE(rs.coord(0, a) == doctest::Approx(-0.25).epsilon(1e-15));
    for (int k = 0; k < rs.shape[1]; ++k)
        CHECK(rx[static_cast<std::size_t>(k) * rs.shape[0] + a] ==
              doctest::Approx(0.25).epsilon(1e-15));

    GridFunction fc = sample([](std::span<const double>, double) { return 7.0; }, og);
    GridFunction rc = reflect(fc, layout);
    for (std::size_t i = 0; i < rc.size(); ++i) CHECK(rc[i] == 7.0);

    GridFunction ft = sample([](std::span<const double>, double t) { return t; }, og);
    GridFunction rt = reflect(ft, layout);
    // t~ = 1.875 reflects to 2T - t~ = 0.125
    int b = 46;
    REQUIRE(rt.spec().coord(1, b) == doctest::Approx(1.875).epsilon(1e-15));
    for (int i = 0; i < rt.spec().shape[0]; ++i)
        CHECK(rt[static_cast<std::size_t>(b) * rt.spec().shape[0] + i] ==
              doctest::Approx(0.125).epsilon(1e-15));

    GridSpec off = GridSpec::line(16, 16, 0, 2, 0, T, false);
    GridFunction bad = sample([](std::span<const double>, double) { return 0.0; }, off);
    CHECK_THROWS_AS(reflect(bad, layout), std::invalid_argument);
}

TEST_CASE("point preimages and distance contraction") {
    ExtensionLayout layout = ExtensionLayout::make(1.0);
    SpaceTimePoint inside{{0.4}, 0.6};
    auto p = reflect_preimage(inside, layout);
    CHECK(p.x[0] == 0.4);
    CHECK(p.t == 0.6);

    auto q = reflect_preimage(SpaceTimePoint{{-0.25}, 0.5}, layout);
    CHECK(q.x[0] == 0.25);
    CHECK(q.t == 0.5);

    auto r = reflect_preimage(SpaceTimePoint{{1.5}, 1.75}, layout);
    CHECK(r.x[0] == 0.5);
    CHECK(r.t == doctest::Approx(0.25).epsilon(1e-15));

    CHECK_THROWS_AS(reflect_preimage(SpaceTimePoint{{2.5}, 0.5}, layout),
                    std::invalid_argument);

    // contraction |x - x'| >= |xbar - xbar'| over all grid pairs
    GridSpec og = omega_grid(16, 1.0);
    const int m = 48;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            double xa = -1.0 + a / 16.0, xb = -1.0 + b / 16.0;
            double pa = og.coord(0, fold_index(a, 16));
            double pb = og.coord(0, fold_index(b, 16));
            CHECK(std::fabs(xa - xb) >= std::fabs(pa - pb) - 1e-14);
        }
}

TEST_CASE("psi is exactly one on Z1 and zero outside Z2") {
    ExtensionLayout layout = ExtensionLayout::make(1.0);
    GridSpec og = omega_grid(32, 1.0);
    GridSpec target = default_extension_target(layout, og);
    CutoffPsi psi = build_psi(layout, target);

    int ones = 0, zeros = 0, mids = 0;
    for (int k = 0; k < target.shape[1]; ++k)
        for (int i = 0; i < target.shape[0]; ++i) {
            double x = target.coord(0, i), t = target.coord(1, k);
            double v = psi.values[static_cast<std::size_t>(k) * target.shape[0] + i];
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            bool in_z1 = x >= -0.25 && x <= 1.25 && t >= -0.25 && t <= 1.25;
            bool out_z2 = x < -0.75 || x > 1.75 || t < -0.75 || t > 1.75;
            if (in_z1) {
                CHECK(v == 1.0);
                ++ones;
            } else if (out_z2) {
                CHECK(v == 0.0);
                ++zeros;
            } else if (v > 0.0 && v < 1.0) {
                ++mids;
            }
        }
    CHECK(ones > 0);
    CHECK(zeros > 0);
    CHECK(mids > 0);

    GridSpec coarse = GridSpec::line(4, 4, -2, 3, -2, 3, false);
    CHECK_THROWS_AS(build_psi(layout, coarse), std::invalid_argument);
}

TEST_CASE("extension restricts exactly and vanishes outside Z2") {
    ExtensionLayout layout = ExtensionLayout::make(1.0);
    GridSpec og = omega_grid(32, 1.0);
    GridSpec target = default_extension_target(layout, og);
    GridFunction f = generate_omega_function(FamilyKind::trig_random, 4242, og);
    ExtensionResult ext = extend(f, layout, target);

    auto tst = target.strides();
    int bx = static_cast<int>(std::lround((0.0 - target.lo[0]) / target.spacing(0)));
    int bt = static_cast<int>(std::lround((0.0 - target.lo[1]) / target.spacing(1)));
    for (int k = 0; k < og.shape[1]; ++k)
        for (int i = 0; i < og.shape[0]; ++i) {
            std::size_t tf = tst[0] * static_cast<std::size_t>(bx + i) +
                             tst[1] * static_cast<std::size_t>(bt + k);
            CHECK(ext.extended[tf] ==
                  f[static_cast<std::size_t>(k) * og.shape[0] + static_cast<std::size_t>(i)]);
        }

    for (int k = 0; k < target.shape[1]; ++k)
        for (int i = 0; i < target.shape[0]; ++i) {
            double x = target.coord(0, i), t = target.coord(1, k);
            if (x < -0.75 || x > 1.75 || t < -0.75 || t > 1.75)
                CHECK(ext.extended[static_cast<std::size_t>(k) * target.shape[0] + i] ==
                      0.0);
        }

    CHECK(ext.extended.max_abs() <= f.max_abs() + 1e-15);

    GridFunction one = sample([](std::span<const double>, double) { return 1.0; }, og);
    CHECK(extend(one, layout, target).extended.max_abs() == 1.0);
}

TEST_CASE("holder transfer check reports the empirical constant") {
    ExtensionLayout layout = ExtensionLayout::make(1.0);
    GridSpec og = omega_grid(32, 1.0);

    GridFunction zero = sample([](std::span<const double>, double) { return 0.0; }, og);
    TransferReport rz = holder_transfer_check(zero, 0.5, layout);
    CHECK(rz.ratio == 1.0);
    CHECK(rz.norm_out == 0.0);

    GridFunction c = sample([](std::span<const double>, double) { return 2.0; }, og);
    TransferReport rc = holder_transfer_check(c, 0.5, layout);
    CHECK(rc.norm_in == 2.0);
    CHECK(rc.norm_out <= 2.0 * (1.0 + rc.psi_semi_x + rc.psi_semi_t) + 1e-12);

    GridFunction f = generate_omega_function(FamilyKind::trig_random, 77, og);
    TransferReport rf = holder_transfer_check(f, 0.5, layout);
    CHECK(rf.ratio > 0.0);
    CHECK(std::isfinite(rf.ratio));
}
