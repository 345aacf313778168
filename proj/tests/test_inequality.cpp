#include <doctest.h>

#include <cmath>

#include "paralog/experiment.hpp"
#include "paralog/inequality.hpp"

using namespace paralog;

namespace {

GridSpec box(int n = 64) { return GridSpec::line(n, n, -4.0, 4.0, -16.0, 16.0, true); }

std::vector<int> n_range_0_8() {
    std::vector<int> r;
    for (int i = 0; i <= 8; ++i) r.push_back(i);
    return r;
}

GridFunction zero_fn(const GridSpec& spec) {
    return sample([](std::span<const double>, double) { return 0.0; }, spec);
}

}  // namespace

TEST_CASE("paper constants match the displayed formulas") {
    auto [c, cp] = paper_constants(0.5);
    CHECK(std::fabs(c - 1.0) <= 1e-12);
    CHECK(std::fabs(cp - 2.414213562373095) <= 1e-12);
    double prev = 1e300;
    for (double g : {0.2, 0.5, 0.8}) {
        double cur = paper_constants(g).second;
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS_AS(paper_constants(0.0), std::invalid_argument);
    CHECK_THROWS_AS(paper_constants(1.0), std::invalid_argument);
}

TEST_CASE("split bound collapses on the zero pair") {
    GridSpec spec = box();
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    GridFunction z = zero_fn(spec);
    SplitEstimate e = split_bound(z, z, bank, 0.5, 3);
    CHECK(e.a1 == 0.0);
    CHECK(e.a2 == 0.0);
    CHECK(e.a3 == 0.0);
    CHECK(e.bound == 0.0);
    CHECK(e.lhs == 0.0);
    CHECK(e.holds());
}

TEST_CASE("band-limited input leaves only the middle term") {
    GridSpec spec = box();
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    // single spatial mode with gauge ~ 2pi*5/8 in levels 1..2
    GridFunction f = sample(
        [&](std::span<const double> x, double) {
            return std::cos(2.0 * M_PI * 5.0 * (x[0] - spec.lo[0]) / spec.length(0));
        },
        spec, "mid mode");
    SplitEstimate e = split_bound(f, zero_fn(spec), bank, 0.5, 4);
    CHECK(e.a1 <= 1e-9 * e.lhs);
    CHECK(e.a3 <= 1e-9 * e.lhs);
    CHECK(e.holds());
}

TEST_CASE("table is monotone where the derivation says so") {
    GridSpec spec = box();
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    FamilySpec fam;
    fam.count = 1;
    fam.master_seed = 8;
    auto m = generate_family(fam, spec)[0];
    auto res = optimize_N(m.f, m.g, bank, 0.5, n_range_0_8());
    REQUIRE(res.table.size() == 9);
    for (std::size_t i = 1; i < res.table.size(); ++i)
        CHECK(res.table[i].a3 <= res.table[i - 1].a3 + 1e-15);  // sup over smaller set

    // argmin self-certification and the tie-break toward smaller N
    double best = res.table[0].bound;
    int arg = 0;
    for (const auto& e : res.table)
        if (e.bound < best) {
            best = e.bound;
            arg = e.n_level;
        }
    CHECK(res.n_star == arg);

    GridFunction z = zero_fn(spec);
    auto rz = optimize_N(z, z, bank, 0.5, n_range_0_8());
    CHECK(rz.n_star == 0);
}

TEST_CASE("positive scaling moves the bound but not the argmin") {
    GridSpec spec = box();
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    FamilySpec fam;
    fam.count = 1;
    fam.master_seed = 88;
    auto m = generate_family(fam, spec)[0];
    auto base = optimize_N(m.f, m.g, bank, 0.5, n_range_0_8());

    std::vector<double> fs(m.f.values().begin(), m.f.values().end());
    std::vector<double> gs(m.g.values().begin(), m.g.values().end());
    for (double& v : fs) v *= 2.0;
    for (double& v : gs) v *= 2.0;
    auto doubled = optimize_N(GridFunction(spec, fs, "2f"), GridFunction(spec, gs, "2g"),
                              bank, 0.5, n_range_0_8());
    CHECK(doubled.n_star == base.n_star);
    for (std::size_t i = 0; i < base.table.size(); ++i) {
        CHECK(doubled.table[i].a1 ==
              doctest::Approx(2.0 * base.table[i].a1).epsilon(1e-12));
        CHECK(doubled.table[i].a2 ==
              doctest::Approx(2.0 * base.table[i].a2).epsilon(1e-12));
        CHECK(doubled.table[i].a3 ==
              doctest::Approx(2.0 * base.table[i].a3).epsilon(1e-12));
        CHECK(doubled.table[i].bound ==
              doctest::Approx(2.0 * base.table[i].bound).epsilon(1e-12));
    }
}

TEST_CASE("split bound certifies the sup norm across a family") {
    GridSpec spec = box();
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    FamilySpec fam;
    fam.count = 8;
    fam.master_seed = 404;
    auto members = generate_family(fam, spec);
    for (const auto& m : members)
        for (double gamma : {0.3, 0.5, 0.7}) {
            auto res = optimize_N(m.f, m.g, bank, gamma, n_range_0_8());
            for (const auto& e : res.table) CHECK(e.holds());
        }
}

TEST_CASE("theorem 1 report on trivial and scaled input") {
    GridSpec spec = box();
    FilterBank hom = FilterBank::build(spec, BankMode::homogeneous);
    FilterBank inh = FilterBank::build(spec, BankMode::inhomogeneous);
    auto nr = n_range_0_8();

    VerificationReport rz = verify_theorem1(zero_fn(spec), hom, inh, 0.5, nr);
    CHECK(rz.lhs == 0.0);
    CHECK(rz.rhs_factor == 1.0);
    CHECK(rz.implied_c == 0.0);

    FamilySpec fam;
    fam.count = 1;
    fam.master_seed = 7;
    auto m = generate_family(fam, spec)[0];
    VerificationReport r = verify_theorem1(m.g, hom, inh, 0.5, nr);
    CHECK(std::isfinite(r.implied_c));
    CHECK(r.rhs_factor ==
          doctest::Approx(1.0 + r.bmo * std::sqrt(log_plus(r.holder + r.g_sup)))
              .epsilon(1e-14));
    CHECK(r.rhs_factor >= 1.0);
    CHECK(r.a3 <= r.besov * (1.0 + 1e-6));

    std::vector<double> g10(m.g.values().begin(), m.g.values().end());
    for (double& v : g10) v *= 10.0;
    VerificationReport r10 = verify_theorem1(GridFunction(spec, g10, "10g"), hom, inh,
                                             0.5, nr);
    CHECK(r10.lhs == doctest::Approx(10.0 * r.lhs).epsilon(1e-12));
    CHECK(r10.rhs_factor ==
          doctest::Approx(1.0 + r10.bmo * std::sqrt(log_plus(r10.holder + r10.g_sup)))
              .epsilon(1e-14));
    CHECK(r10.implied_c == doctest::Approx(r10.lhs / r10.rhs_factor).epsilon(1e-14));
}

TEST_CASE("theorem 2 report on trivial inputs") {
    GridSpec omega = GridSpec::line(32, 32, 0, 1, 0, 1, false);
    ExtensionLayout layout = ExtensionLayout::make(1.0);
    GridSpec target = default_extension_target(layout, omega);
    FilterBank hom = FilterBank::build(target, BankMode::homogeneous);
    FilterBank inh = FilterBank::build(target, BankMode::inhomogeneous);
    auto nr = n_range_0_8();

    VerificationReport rz = verify_theorem2(zero_fn(omega), 0.5, layout, hom, inh, nr);
    CHECK(rz.lhs == 0.0);
    CHECK(rz.rhs_factor == 1.0);

    GridFunction one = sample([](std::span<const double>, double) { return 1.0; }, omega);
    VerificationReport r1 = verify_theorem2(one, 0.5, layout, hom, inh, nr);
    CHECK(r1.lhs == 1.0);
    CHECK(r1.bmo == 0.0);
    CHECK(r1.l1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r1.rhs_factor ==
          doctest::Approx(1.0 + std::sqrt(std::log(M_E + 1.0))).epsilon(1e-12));
    CHECK(r1.lhs <= r1.extension_sup + 1e-15);

    GridFunction f = generate_omega_function(FamilyKind::trig_random, 13, omega);
    VerificationReport rf = verify_theorem2(f, 0.5, layout, hom, inh, nr);
    CHECK(rf.lhs <= rf.extension_sup + 1e-12);
    CHECK(std::isfinite(rf.claim_h_ratio));
    CHECK(std::isfinite(rf.bmo_transfer_ratio));
    CHECK(std::isfinite(rf.g_sup_ratio));
}

TEST_CASE("sharpness probe rows") {
    GridSpec spec = box(256);
    FilterBank bank = FilterBank::build(spec, BankMode::homogeneous);
    std::vector<int> single{1};
    auto rows = sharpness_probe(single, bank, 0.5);
    REQUIRE(rows.size() == 1);
    CHECK(std::isfinite(rows[0].ratio));
    CHECK(rows[0].ratio > 0.0);

    std::vector<int> ms{1, 2, 3, 4};
    auto table = sharpness_probe(ms, bank, 0.5);
    for (const auto& row : table)
        CHECK(row.linf == doctest::Approx(static_cast<double>(row.m)).epsilon(1e-12));

    std::vector<int> too_deep{20};
    CHECK_THROWS_AS(sharpness_probe(too_deep, bank, 0.5), std::invalid_argument);
}

TEST_CASE("csv and jsonl rows are deterministic") {
    ExperimentConfig cfg;
    cfg.nx = cfg.nt = 64;
    cfg.family.count = 3;
    cfg.family.master_seed = 5;
    std::vector<double> gammas{0.5};
    FamilyRun a = run_theorem1_family(cfg, gammas);
    FamilyRun b = run_theorem1_family(cfg, gammas);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(csv_line(a.rows[i]) == csv_line(b.rows[i]));
        CHECK(jsonl_line(a.rows[i]) == jsonl_line(b.rows[i]));
    }
    CHECK(a.implied_c_max == b.implied_c_max);
}
