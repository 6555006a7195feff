// jst — batch experiment runner for lattice scattering, Schrodinger-type
// evolution and the double-time decay experiments. Emits plot-ready CSV.
//
// Exit codes: 0 pass, 1 scientific failure (an invariant or verdict did not
// hold), 2 usage or input error.

#include <CLI11.hpp>
#include <climits>
#include <cmath>
#include <iostream>

#include "jst/continuation.hpp"
#include "jst/core.hpp"
#include "jst/csv.hpp"
#include "jst/fixtures.hpp"
#include "jst/selfcheck.hpp"
#include "jst/uncertainty.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = "out";
    std::string profile_path;
    std::string u0_spec = "delta0";  // delta0 | envelope | <csv path>
    std::uint64_t seed = 1;
    int m_samples = 1024;
    double dt = 1e-3;
    double epsilon = 0.5;
    int padding = 40;
    double t = 1.0;
    int n0 = 0;
    bool inject_perturbation = false;
    std::vector<int> only;
    int inject_fault = 0;
};

jst::CoefficientProfile load_profile(const Options& opt) {
    if (opt.profile_path.empty()) return jst::free_profile();
    auto p = jst::load_profile_csv(opt.profile_path);
    // profile files carry no decay metadata; store the measured minimal
    // admissible constant so every subcommand accepts the profile
    const auto report = jst::admissibility_check(p);
    if (std::isfinite(report.minimal_C))
        p.decay_constant = std::max(1.0, 1.05 * report.minimal_C);
    return p;
}

jst::GridWindow window_for(const jst::CoefficientProfile& p, int padding) {
    return {std::min(p.window_lo, 0) - padding, std::max(p.window_hi, 0) + padding};
}

jst::WavePacket build_u0(const Options& opt, const jst::CoefficientProfile& p) {
    const jst::GridWindow w = window_for(p, opt.padding);
    if (opt.u0_spec == "delta0") {
        jst::WavePacket u;
        u.values = jst::ComplexSequence(w);
        u.values[0] = 1.0;
        return u;
    }
    if (opt.u0_spec == "envelope") {
        jst::EnvelopeSpec env;
        env.epsilon = opt.epsilon;
        return jst::envelope_saturating_packet(env, w);
    }
    return jst::load_packet_csv(opt.u0_spec);
}

int cmd_jost(const Options& opt) {
    const auto p = load_profile(opt);
    const std::filesystem::path out(opt.out_dir);

    const jst::GridWindow range{std::min(p.window_lo, 0) - 8, std::max(p.window_hi, 0) + 4};
    const auto expansion = jst::jost_expansion_extract(p, jst::Side::plus, range, 512, 64);
    jst::save_k_table_csv(expansion, out / "k_table.csv");

    const jst::GridWindow w = window_for(p, opt.padding);
    const jst::VectorXc grid = jst::rotated_circle_grid(16);
    jst::csv::Writer values(out / "jost_values.csv", "side,theta_re,theta_im,n,re,im");
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        for (auto side : {jst::Side::plus, jst::Side::minus}) {
            const auto sol = jst::compute_jost(p, grid[k], side, w);
            for (int n = w.lo; n <= w.hi; ++n)
                values.row({side == jst::Side::plus ? "+" : "-", jst::csv::fmt(grid[k].real()),
                            jst::csv::fmt(grid[k].imag()), jst::csv::fmt(n),
                            jst::csv::fmt(sol.values[n].real()),
                            jst::csv::fmt(sol.values[n].imag())});
        }
    }

    const auto report = jst::verify_K_bounds(expansion, jst::decay_bounds(p), 1e-6);
    std::ofstream txt(out / "kbound_report.txt");
    txt << "max_ratio: " << jst::csv::fmt(report.max_ratio) << "\n"
        << "argmax_j: " << report.argmax_j << "\nargmax_n: " << report.argmax_n << "\n"
        << "pass: " << (report.pass ? "yes" : "no") << "\n";
    std::cout << "K-bound max ratio " << report.max_ratio << (report.pass ? " (pass)" : " (FAIL)")
              << "\n";
    return report.pass ? 0 : 1;
}

int cmd_scatter(const Options& opt) {
    const auto p = load_profile(opt);
    const jst::GridWindow w = window_for(p, opt.padding);
    const auto data = jst::compute_scattering(p, opt.m_samples, w);
    const std::filesystem::path out(opt.out_dir);
    jst::save_scattering_csv(data, out / "scattering.csv");
    jst::save_eigenvalues_csv(data.bound_states, out / "eigenvalues.csv");

    double unitarity = 0.0;
    for (Eigen::Index k = 0; k < data.theta_grid.size(); ++k)
        unitarity = std::max(unitarity, std::abs(std::norm(data.alpha[k]) -
                                                 std::norm(data.beta_plus[k]) - 1.0));
    std::cout << "wronskian drift " << data.wronskian_drift << ", |alpha|^2-|beta|^2-1 max "
              << unitarity << ", " << data.bound_states.size() << " bound state(s)\n";
    return (data.wronskian_drift <= 1e-12 && unitarity <= 1e-8) ? 0 : 1;
}

int cmd_spectrum(const Options& opt) {
    const auto p = load_profile(opt);
    const jst::GridWindow w = window_for(p, std::max(opt.padding, 60));
    const jst::SpectralTransform transform(p, w, opt.m_samples);
    const std::filesystem::path out(opt.out_dir);
    jst::save_eigenvalues_csv(transform.measure().point_masses, out / "eigenvalues.csv");

    jst::ComplexSequence delta0(w);
    delta0[0] = 1.0;
    double parseval = transform.parseval_residual(delta0);
    double diag = transform.diagonalization_residual(delta0);
    const auto f = jst::fixtures::random_packet(w, opt.seed, w.lo / 2, w.hi / 2);
    parseval = std::max(parseval, transform.parseval_residual(f));
    diag = std::max(diag, transform.diagonalization_residual(f));

    std::ofstream txt(out / "residuals.txt");
    txt << "parseval: " << jst::csv::fmt(parseval) << "\ndiagonalization: " << jst::csv::fmt(diag)
        << "\n";
    std::cout << "parseval " << parseval << ", diagonalization " << diag << "\n";
    return (parseval <= 1e-8 && diag <= 1e-9) ? 0 : 1;
}

int cmd_evolve(const Options& opt) {
    const auto p = load_profile(opt);
    const jst::WavePacket u0 = build_u0(opt, p);
    jst::EvolutionConfig cfg;
    cfg.circle_samples = opt.m_samples;
    cfg.time_step = opt.dt;

    const jst::WavePacket us = jst::evolve_spectral(p, u0, opt.t, cfg);
    const jst::WavePacket ud = jst::evolve_direct(p, u0, opt.t, cfg);
    const double gap = u0.norm() > 0.0
                           ? (us.values.values() - ud.values.values()).norm() / u0.norm()
                           : 0.0;
    jst::save_packet_csv(us, std::filesystem::path(opt.out_dir) / "evolved.csv");
    std::cout << "t " << us.time << ", methods gap " << gap << "\n";
    return gap <= 1e-6 ? 0 : 1;
}

int cmd_uncertainty(const Options& opt) {
    const auto p = load_profile(opt);
    jst::UncertaintyConfig cfg;
    cfg.envelope.epsilon = opt.epsilon;
    cfg.window = window_for(p, std::max(opt.padding, 60));
    cfg.circle_samples = opt.m_samples;
    cfg.time_step = opt.dt;
    cfg.out_dir = std::filesystem::path(opt.out_dir);

    jst::WavePacket u0;
    if (opt.u0_spec == "delta0" || opt.u0_spec == "envelope")
        u0 = jst::envelope_saturating_packet(cfg.envelope, cfg.window);
    else
        u0 = jst::load_packet_csv(opt.u0_spec);

    const auto report = jst::run_uncertainty_experiment(p, u0, cfg);
    std::cout << "verdict: " << report.verdict << "\n"
              << "type(B1) t0 " << report.type_t0.sigma_hat << ", t1 " << report.type_t1.sigma_hat
              << ", phi residual " << report.phi_residual << "\n";
    if (report.aborted || !report.theorem_consistent) return 1;
    return 0;
}

int cmd_continuation(const Options& opt) {
    const auto p = load_profile(opt);
    jst::WavePacket u0;
    u0.values = jst::fixtures::random_packet(window_for(p, std::max(opt.padding, 25)), opt.seed,
                                             -2, 2);
    jst::EvolutionConfig cfg;
    cfg.circle_samples = opt.m_samples;
    cfg.time_step = opt.dt;
    const int samples = 41;
    const auto u = jst::sample_spectral_evolution(p, u0, 0.0, 0.4, samples, cfg);
    auto v = jst::sample_direct_evolution(p, u0, 0.0, 0.4, samples, cfg);
    if (opt.inject_perturbation)
        for (int k = 0; k < samples; ++k)
            v.snapshots[k][opt.n0 + 5] += 1e-3 * std::sin(M_PI * k / (samples - 1.0));

    const auto report = jst::continuation_check(p, u, v, opt.n0, 1e-6);
    jst::save_continuation_csv(report, std::filesystem::path(opt.out_dir) / "continuation.csv");
    std::cout << report.verdict << "\n";
    return (report.hypothesis_ok && report.first_flagged_site == INT_MIN) ? 0 : 1;
}

int cmd_selfcheck(const Options& opt) {
    jst::SelfCheckOptions sopts;
    sopts.only = opt.only;
    sopts.inject_fault = opt.inject_fault;
    const auto results = jst::run_acceptance(sopts, &std::cout);
    return jst::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jacobi lattice scattering and evolution toolkit"};
    app.require_subcommand(1);

    Options opt;
    app.set_config("--config")->check(CLI::ExistingFile);
    app.allow_config_extras(CLI::config_extras_mode::error);  // unknown keys are rejected
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--profile", opt.profile_path, "profile CSV (`n,a,b`); free profile if absent");
    app.add_option("--seed", opt.seed, "seed for randomized inputs");
    app.add_option("--m-samples", opt.m_samples, "circle grid size")->check(CLI::PositiveNumber);
    app.add_option("--dt", opt.dt, "direct-method time step")->check(CLI::PositiveNumber);
    app.add_option("--epsilon", opt.epsilon, "envelope epsilon")->check(CLI::PositiveNumber);
    app.add_option("--padding", opt.padding, "window padding beyond the perturbation")
        ->check(CLI::PositiveNumber);
    app.add_option("--t", opt.t, "evolution time");
    app.add_option("--u0", opt.u0_spec, "initial data: delta0 | envelope | <packet csv>");
    app.add_option("--n0", opt.n0, "continuation base site");
    app.add_flag("--inject-perturbation", opt.inject_perturbation,
                 "continuation negative control: perturb one trace at n0+5");
    app.add_option("--only", opt.only, "run only these criteria ids (selfcheck)")
        ->check(CLI::Range(1, 10));
    app.add_option("--inject-fault", opt.inject_fault, "force criterion N to fail (test hook)")
        ->group("");  // hidden

    // shared options may be written before or after the subcommand
    app.add_subcommand("jost", "Jost solutions, series coefficients and their decay bounds")
        ->fallthrough();
    app.add_subcommand("scatter", "scattering coefficients on the unit circle")->fallthrough();
    app.add_subcommand("spectrum", "eigenvalue report and transform residuals")->fallthrough();
    app.add_subcommand("evolve", "time evolution by both methods, cross-validated")
        ->fallthrough();
    app.add_subcommand("uncertainty", "the double-time decay experiment")->fallthrough();
    app.add_subcommand("continuation", "two-site unique continuation check")->fallthrough();
    app.add_subcommand("selfcheck", "run the built-in verification suite")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand("jost")) return cmd_jost(opt);
        if (app.got_subcommand("scatter")) return cmd_scatter(opt);
        if (app.got_subcommand("spectrum")) return cmd_spectrum(opt);
        if (app.got_subcommand("evolve")) return cmd_evolve(opt);
        if (app.got_subcommand("uncertainty")) return cmd_uncertainty(opt);
        if (app.got_subcommand("continuation")) return cmd_continuation(opt);
        if (app.got_subcommand("selfcheck")) return cmd_selfcheck(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
