// tumorlin: radial stationary state of the two-cell-species free-boundary
// tumor model, its spherical-harmonic mode reduction, and empirical decay /
// surface-tension-threshold surveys of the linearized dynamics.
//
// Subcommands:
//   stationary   solve the radial state, write stationary.csv, print R_s
//   modes        assemble mode data k = 0..k_max, write modes.csv
//   evolve       integrate one coupled mode (--k, --gamma), write trajectory_k{K}.csv
//   survey       empirical decay rates over (gamma, k, trial), write decay.csv
//   gammastar    locate the empirical surface-tension threshold, write report.json
//   theorem81    multi-mode composite run at one gamma, write theorem81.json
//
// Common flags: -c/--config FILE (json or key=value), --out DIR, --threads N,
// --k K, --gamma G. TUMORLIN_OUTDIR overrides the output directory.
//
// Exit codes: 0 all green, 1 configuration/solver errors, 2 an invariant or
// verdict failed (details on stderr).

#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "tumorlin/config.hpp"
#include "tumorlin/csvio.hpp"
#include "tumorlin/errors.hpp"
#include "tumorlin/evolution.hpp"
#include "tumorlin/modes.hpp"
#include "tumorlin/stability.hpp"
#include "tumorlin/stationary.hpp"

using namespace tumorlin;

namespace {

struct CliArgs {
    std::string subcommand;
    std::string config_path;
    std::string out_override;
    int k = -1;
    double gamma = 0.0;
    bool has_gamma = false;
    int threads = 0;
};

void usage() {
    std::fprintf(stderr,
                 "usage: tumorlin <stationary|modes|evolve|survey|gammastar|theorem81>"
                 " -c CONFIG [--out DIR] [--threads N] [--k K] [--gamma G]\n");
}

CliArgs parse_args(int argc, char** argv) {
    CliArgs args;
    if (argc < 2) throw std::runtime_error("missing subcommand");
    args.subcommand = argv[1];
    for (int i = 2; i < argc; ++i) {
        const std::string a = argv[i];
        auto next = [&](const char* what) -> std::string {
            if (i + 1 >= argc) throw std::runtime_error(std::string("missing value for ") + what);
            return argv[++i];
        };
        if (a == "-c" || a == "--config") args.config_path = next("--config");
        else if (a == "--out") args.out_override = next("--out");
        else if (a == "--threads") args.threads = std::stoi(next("--threads"));
        else if (a == "--k") args.k = std::stoi(next("--k"));
        else if (a == "--gamma") {
            args.gamma = std::stod(next("--gamma"));
            args.has_gamma = true;
        } else {
            throw std::runtime_error("unknown argument '" + a + "'");
        }
    }
    if (args.config_path.empty()) throw std::runtime_error("a config file is required (-c FILE)");
    return args;
}

std::string outpath(const RunConfig& cfg, const std::string& name) {
    std::string dir = cfg.output_dir;
    if (const char* env = std::getenv("TUMORLIN_OUTDIR"); env && *env) dir = env;
    if (dir.empty()) return name;
    return dir + "/" + name;
}

nlohmann::json constants_json(const SpectralConstants& sc) {
    nlohmann::json j;
    j["nu0"] = sc.nu0;
    j["mu0_star"] = sc.mu0_star;
    j["kappa0"] = sc.kappa0;
    j["mu_star"] = sc.mu_star;
    j["lambda2"] = sc.lambda2;
    j["mu1_star"] = sc.mu1_star;
    j["mu2_star"] = sc.mu2_star;
    j["mu_k"] = sc.mu_k;
    return j;
}

int run(const CliArgs& args) {
    RunConfig cfg = load_config(args.config_path);
    if (!args.out_override.empty()) cfg.output_dir = args.out_override;
    if (args.threads > 0) cfg.threads = args.threads;

    const ConditionReport conds = check_conditions(cfg.params);
    if (!conds.satisfies_1_25) {
        std::string which;
        for (const auto& c : conds.checks)
            if (!c.pass) which += (which.empty() ? "" : ", ") + c.inequality;
        std::fprintf(stderr, "error: parameter conditions k_B>k_D>=2k_Q>0, k_B>k_P, k_B k_Q<=k_D k_P fail: %s\n",
                     which.c_str());
        return 1;
    }

    SolverOptions sopts;
    sopts.grid_n = cfg.grid_n;
    const StationarySolution sol = solve_stationary(cfg.params, sopts);
    const double dt = cfl_dt(sol, cfg.dt_cfl);

    if (args.subcommand == "stationary") {
        atomic_write(outpath(cfg, "stationary.csv"), stationary_csv(sol));
        const ValidationReport rep = validate_stationary(sol);
        std::printf("R_s = %.17g\n", sol.R_s);
        for (const auto& item : rep.items)
            if (!item.pass)
                std::fprintf(stderr, "invariant failed: %s (node %d, value %.6e)\n",
                             item.name.c_str(), item.worst_node, item.worst_value);
        return rep.all_pass ? 0 : 2;
    }

    if (args.subcommand == "modes") {
        const double gamma = args.has_gamma ? args.gamma : cfg.params.gamma;
        std::vector<ModeData> mds;
        mds.reserve(cfg.k_max + 1);
        for (int k = 0; k <= cfg.k_max; ++k) mds.push_back(assemble_mode(sol, k, gamma));
        atomic_write(outpath(cfg, "modes.csv"), modes_csv(mds));
        std::printf("assembled %d modes at gamma = %.17g (R_s = %.17g)\n", cfg.k_max + 1, gamma,
                    sol.R_s);
        bool green = true;
        for (const auto& m : mds) green = green && m.mu_k < 0.0;
        return green ? 0 : 2;
    }

    if (args.subcommand == "evolve") {
        if (args.k < 0) throw std::runtime_error("evolve requires --k");
        const double gamma = args.has_gamma ? args.gamma : cfg.params.gamma;
        const ModeData md = assemble_mode(sol, args.k, gamma);
        std::vector<double> phi0(sol.nodes(), 1.0);
        const ModeTrajectory traj =
            evolve_coupled(sol, md, gamma, phi0, 1.0, cfg.T, dt, CoupledFrame::Tilde);
        atomic_write(outpath(cfg, "trajectory_k" + std::to_string(args.k) + ".csv"),
                     trajectory_csv(traj));
        const DecayFit fit = fit_decay(traj, NormChoice::Sup, 0.5 * cfg.T, cfg.T);
        std::printf("k=%d gamma=%.17g fitted sup rate %.17g (r2=%.6f)\n", args.k, gamma, fit.rate,
                    fit.r2);
        return 0;
    }

    if (args.subcommand == "survey") {
        std::vector<int> ks(cfg.k_max + 1);
        for (int k = 0; k <= cfg.k_max; ++k) ks[k] = k;
        const DecayReport rep =
            decay_survey(sol, cfg.gammas, ks, cfg.T, dt, cfg.trials, cfg.seed, cfg.threads);
        atomic_write(outpath(cfg, "decay.csv"), decay_csv(rep));
        int flagged = 0;
        for (const auto& c : rep.rows) flagged += c.flagged ? 1 : 0;
        std::printf("survey: %zu cells, %d flagged fits -> %s\n", rep.rows.size(), flagged,
                    outpath(cfg, "decay.csv").c_str());
        return validate_stationary(sol).all_pass ? 0 : 2;
    }

    if (args.subcommand == "gammastar") {
        const SpectralConstants sc = spectral_constants(sol, cfg.k_max);
        std::vector<int> ks;
        for (int k = 2; k <= std::max(2, std::min(8, cfg.k_max)); ++k) ks.push_back(k);
        nlohmann::json j;
        j["spectral_constants"] = constants_json(sc);
        j["R_s"] = sol.R_s;
        bool green = true;
        try {
            const GammaStarEstimate est = find_gamma_star(
                sol, ks, cfg.lambda_target, {cfg.gamma_lo, cfg.gamma_hi}, cfg.T, dt, cfg.threads);
            j["gamma_star"] = {{"gamma_hat", est.gamma_hat},
                               {"lambda_target", est.lambda_target},
                               {"margin", est.margin},
                               {"k_range", est.k_range},
                               {"binding_k", est.binding_k},
                               {"alpha_tilde_all_negative", est.alpha_tilde_all_negative}};
            j["verdict"] = (est.margin > 0.0) ? "stable-above-gamma_hat" : "inconclusive";
            green = est.margin > 0.0;
            std::printf("gamma_hat = %.17g (margin %.6g, binding k=%d)\n", est.gamma_hat,
                        est.margin, est.binding_k);
        } catch (const NoThreshold& e) {
            j["gamma_star"] = nullptr;
            j["verdict"] = std::string("no-threshold: ") + e.what();
            std::fprintf(stderr, "%s\n", e.what());
            green = false;
        }
        atomic_write(outpath(cfg, "report.json"), j.dump(2) + "\n");
        return green ? 0 : 2;
    }

    if (args.subcommand == "theorem81") {
        const double gamma = args.has_gamma ? args.gamma : cfg.gammas.back();
        const Theorem81Report rep = theorem81_report(sol, gamma, cfg.alpha, cfg.beta, cfg.k_max,
                                                     cfg.T, dt, cfg.seed, cfg.threads);
        nlohmann::json j;
        j["gamma"] = gamma;
        j["alpha"] = rep.alpha;
        j["beta"] = rep.beta;
        j["global_rate"] = rep.global_rate;
        j["r2"] = rep.r2;
        j["C_estimate"] = rep.C_estimate;
        j["dev_total_0"] = rep.dev_total_0;
        j["dev_total_T"] = rep.dev_total_T;
        j["dev_X22_0"] = rep.dev_X22_0;
        j["dev_X22_T"] = rep.dev_X22_T;
        j["c_l"] = rep.c_l;
        j["T"] = rep.T;
        atomic_write(outpath(cfg, "theorem81.json"), j.dump(2) + "\n");
        std::printf("theorem81: rate %.6f, X22 deviation %.6e -> %.6e\n", rep.global_rate,
                    rep.dev_X22_0, rep.dev_X22_T);
        return rep.global_rate < 0.0 ? 0 : 2;
    }

    usage();
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    try {
        const CliArgs args = parse_args(argc, argv);
        return run(args);
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        usage();
        return 1;
    }
}
