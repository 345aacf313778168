#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "paralog/experiment.hpp"
#include "paralog/pgf.hpp"
#include "paralog/selftest.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

int fail_invariant(const std::string& name) {
    std::cerr << "invariant failure: " << name << "\n";
    return 1;
}

bool rows_finite(const std::vector<paralog::VerificationReport>& rows,
                 std::string& which) {
    for (const auto& r : rows) {
        for (double v : {r.lhs, r.bmo, r.holder, r.g_sup, r.l1, r.rhs_factor, r.implied_c,
                         r.a1, r.a2, r.a3, r.besov, r.claim_h_ratio, r.bmo_transfer_ratio,
                         r.g_sup_ratio})
            if (!std::isfinite(v)) {
                which = "non-finite value in report for seed " + std::to_string(r.seed);
                return false;
            }
    }
    return true;
}

ordered_json box_json(const paralog::Region& r) {
    return ordered_json{{"lo", r.lo}, {"hi", r.hi}};
}

int cmd_norms(const paralog::ExperimentConfig& cfg,
              const std::vector<std::string>& inputs) {
    for (const auto& path : inputs) {
        paralog::GridFunction f = paralog::read_pgf(path);
        paralog::HolderReport hol = paralog::holder_norm(f, cfg.gamma);
        double besov = 0.0;
        bool po2 = true;
        for (int s : f.spec().shape) po2 = po2 && (s & (s - 1)) == 0;
        if (po2) {
            paralog::GridSpec periodic = f.spec();
            periodic.periodic = true;
            paralog::GridFunction pf(periodic,
                                     {f.values().begin(), f.values().end()}, f.label());
            auto bank =
                paralog::FilterBank::build(periodic, paralog::BankMode::inhomogeneous);
            besov = paralog::besov_norm(pf, bank, cfg.gamma).value;
        }
        ordered_json j;
        j["l_inf"] = hol.sup_norm;
        j["l1"] = paralog::lp_norm(f, 1);
        j["l2"] = paralog::lp_norm(f, 2);
        j["semi_x"] = hol.semi_x;
        j["semi_t"] = hol.semi_t;
        j["holder"] = hol.total;
        j["bmo"] = paralog::bmo_norm(f).value;
        j["besov"] = besov;
        j["gamma"] = cfg.gamma;
        j["label"] = f.label();
        std::cout << j.dump() << "\n";
    }
    return 0;
}

int cmd_decompose(const paralog::ExperimentConfig& cfg, const std::string& input,
                  const std::string& mode_name) {
    paralog::GridFunction f = paralog::read_pgf(input);
    paralog::BankMode mode = mode_name == "homogeneous"
                                 ? paralog::BankMode::homogeneous
                                 : paralog::BankMode::inhomogeneous;
    auto bank = paralog::FilterBank::build(f.spec(), mode);
    auto decomp = paralog::decompose(f, bank);
    auto residual = paralog::partition_residual(bank);

    fs::create_directories(cfg.out_dir);
    ordered_json manifest;
    manifest["mode"] = mode_name;
    manifest["j_min"] = bank.j_min();
    manifest["j_max"] = bank.j_max();
    manifest["partition_residual_covered"] = residual.max_residual_covered;
    manifest["partition_residual_outside"] = residual.max_residual_outside;
    ordered_json levels = ordered_json::array();
    for (const auto& b : decomp.blocks) {
        std::string name =
            b.low_pass ? "block_theta.pgf" : "block_j" + std::to_string(b.level) + ".pgf";
        paralog::write_pgf(cfg.out_dir + "/" + name, b.values);
        levels.push_back(ordered_json{{"level", b.level},
                                      {"low_pass", b.low_pass},
                                      {"sup", b.sup},
                                      {"file", name}});
    }
    manifest["levels"] = levels;
    std::ofstream out(cfg.out_dir + "/manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
    std::cout << "wrote " << decomp.blocks.size() << " blocks to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_extend(const paralog::ExperimentConfig& cfg, const std::string& input) {
    paralog::GridFunction f = paralog::read_pgf(input);
    paralog::ExtensionLayout layout = paralog::ExtensionLayout::make(cfg.T, f.spec().n);
    paralog::GridSpec target = paralog::default_extension_target(layout, f.spec());
    paralog::ExtensionResult ext = paralog::extend(f, layout, target);

    fs::create_directories(cfg.out_dir);
    paralog::write_pgf(cfg.out_dir + "/extended.pgf", ext.extended);

    ordered_json side;
    side["T"] = layout.T;
    side["omega"] = box_json(layout.omega);
    side["omega_tilde"] = box_json(layout.omega_tilde);
    side["z1"] = box_json(layout.z1);
    side["z2"] = box_json(layout.z2);
    side["psi_profile"] = "tensor plateau, ramp exp(-1/u)/(exp(-1/u)+exp(-1/(1-u)))";
    side["gamma"] = cfg.gamma;
    side["psi_semi_x"] = paralog::holder_seminorm_x(ext.psi, cfg.gamma);
    side["psi_semi_t"] = paralog::holder_seminorm_t(ext.psi, cfg.gamma);
    side["extension_sup"] = ext.extended.max_abs();
    std::ofstream out(cfg.out_dir + "/extended.json", std::ios::binary);
    out << side.dump(2) << "\n";
    std::cout << "wrote extension to " << cfg.out_dir << "\n";
    return 0;
}

int cmd_verify(const paralog::ExperimentConfig& cfg, int theorem) {
    std::vector<double> gammas{cfg.gamma};
    paralog::FamilyRun run = theorem == 1
                                 ? paralog::run_theorem1_family(cfg, gammas)
                                 : paralog::run_theorem2_family(cfg, gammas);
    std::string which;
    if (!rows_finite(run.rows, which)) return fail_invariant(which);

    fs::create_directories(cfg.out_dir);
    std::string stem = theorem == 1 ? "/verify_rn" : "/verify_domain";
    paralog::write_csv(cfg.out_dir + stem + ".csv", run.rows);
    paralog::write_jsonl(cfg.out_dir + stem + ".jsonl", run.rows);
    std::cout << "rows " << run.rows.size() << ", implied_C max " << run.implied_c_max
              << ", split holds " << (run.split_holds ? "yes" : "no")
              << ", worst slack " << run.worst_split_slack << "\n";
    if (!run.split_holds) return fail_invariant("split bound lhs <= bound");
    return 0;
}

int cmd_split_table(const paralog::ExperimentConfig& cfg) {
    paralog::GridSpec grid = cfg.grid();
    auto bank = paralog::FilterBank::build(grid, paralog::BankMode::homogeneous);
    paralog::FamilySpec one = cfg.family;
    one.count = 1;
    auto members = paralog::generate_family(one, grid);
    auto res = paralog::optimize_N(members[0].f, members[0].g, bank, cfg.gamma,
                                   cfg.n_range());

    fs::create_directories(cfg.out_dir);
    std::ofstream out(cfg.out_dir + "/split_table.csv", std::ios::binary);
    out << "N,A1,A2,A3,bound,lhs,slack\n";
    char buf[256];
    for (const auto& e : res.table) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      e.n_level, e.a1, e.a2, e.a3, e.bound, e.lhs, e.bound - e.lhs);
        out << buf;
        if (!e.holds()) return fail_invariant("split bound lhs <= bound at N=" +
                                              std::to_string(e.n_level));
    }
    std::cout << "N* = " << res.n_star << ", bound " << res.best.bound << ", lhs "
              << res.best.lhs << "\n";
    return 0;
}

int cmd_sharpness(const paralog::ExperimentConfig& cfg, int m_min, int m_max) {
    paralog::GridSpec grid = cfg.grid();
    auto bank = paralog::FilterBank::build(grid, paralog::BankMode::homogeneous);
    std::vector<int> ms;
    for (int m = m_min; m <= m_max; ++m) ms.push_back(m);
    auto rows = paralog::sharpness_probe(ms, bank, cfg.gamma);

    fs::create_directories(cfg.out_dir);
    std::ofstream out(cfg.out_dir + "/sharpness.csv", std::ios::binary);
    out << "M,linf,bmo,holder,ratio\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", r.m, r.linf,
                      r.bmo, r.holder, r.ratio);
        out << buf;
        std::cout << "M=" << r.m << " linf=" << r.linf << " bmo=" << r.bmo
                  << " ratio=" << r.ratio << "\n";
        if (!std::isfinite(r.ratio)) return fail_invariant("sharpness ratio finite");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic space-time Littlewood-Paley and log-Hoelder toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");

    paralog::ExperimentConfig cfg;
    std::string family_kind = "trig-random";
    app.add_option("--gamma", cfg.gamma, "Hoelder exponent in (0,1)");
    app.add_option("--nx", cfg.nx, "spatial samples (periodic box)");
    app.add_option("--nt", cfg.nt, "time samples (periodic box)");
    app.add_option("--x-lo", cfg.x_lo, "box lower x");
    app.add_option("--x-hi", cfg.x_hi, "box upper x");
    app.add_option("--t-lo", cfg.t_lo, "box lower t");
    app.add_option("--t-hi", cfg.t_hi, "box upper t");
    app.add_option("--T", cfg.T, "time horizon of Omega_T");
    app.add_option("--omega-nx", cfg.omega_nx, "Omega_T spatial samples");
    app.add_option("--omega-nt", cfg.omega_nt, "Omega_T time samples");
    app.add_option("--family", family_kind,
                   "trig-random|bump|lacunary|heat-smoothed-noise|holder-rough");
    app.add_option("--count", cfg.family.count, "family member count");
    app.add_option("--seed", cfg.family.master_seed, "master seed");
    app.add_option("--modes", cfg.family.modes, "trig term count");
    app.add_option("--decay", cfg.family.decay, "amplitude decay exponent");
    app.add_option("--depth", cfg.family.lacunary_depth, "lacunary depth M");
    app.add_option("--roughness", cfg.family.roughness, "target rough exponent");
    app.add_option("--n-max", cfg.n_max, "split N range is 0..n_max");
    app.add_option("--out-dir", cfg.out_dir, "artifact directory");

    auto* sc_norms = app.add_subcommand("norms", "norm report per input PGF");
    std::vector<std::string> norm_inputs;
    sc_norms->add_option("inputs", norm_inputs, "PGF files")->required();

    auto* sc_dec = app.add_subcommand("decompose", "export block decomposition");
    std::string dec_input, dec_mode = "inhomogeneous";
    sc_dec->add_option("input", dec_input, "PGF file")->required();
    sc_dec->add_option("--mode", dec_mode, "homogeneous|inhomogeneous");

    auto* sc_ext = app.add_subcommand("extend", "Omega_T -> big-box extension");
    std::string ext_input;
    sc_ext->add_option("input", ext_input, "PGF file on Omega_T")->required();

    auto* sc_rn = app.add_subcommand("verify-rn", "full-space theorem family run");
    auto* sc_dom = app.add_subcommand("verify-domain", "bounded-domain theorem family run");
    auto* sc_split = app.add_subcommand("split-table", "bound vs N for one seeded pair");

    auto* sc_sharp = app.add_subcommand("sharpness", "lacunary sharpness probe");
    int m_min = 2, m_max = 6;
    sc_sharp->add_option("--m-min", m_min, "smallest depth");
    sc_sharp->add_option("--m-max", m_max, "largest depth");

    auto* sc_self = app.add_subcommand("selftest", "full invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cfg.family.kind = paralog::family_kind_from_string(family_kind);
        cfg.validate();

        if (sc_norms->parsed()) return cmd_norms(cfg, norm_inputs);
        if (sc_dec->parsed()) return cmd_decompose(cfg, dec_input, dec_mode);
        if (sc_ext->parsed()) return cmd_extend(cfg, ext_input);
        if (sc_rn->parsed()) return cmd_verify(cfg, 1);
        if (sc_dom->parsed()) return cmd_verify(cfg, 2);
        if (sc_split->parsed()) return cmd_split_table(cfg);
        if (sc_sharp->parsed()) return cmd_sharpness(cfg, m_min, m_max);
        if (sc_self->parsed()) {
            auto results = paralog::run_acceptance(cfg, std::cout);
            if (paralog::all_passed(results)) return 0;
            for (const auto& r : results)
                if (!r.pass) {
                    std::cerr << "invariant failure: criterion " << r.id << " " << r.name
                              << "\n";
                    break;
                }
            return 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
