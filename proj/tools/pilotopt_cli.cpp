// SPDX-License-Identifier: Apache-2.0
//
// pilotopt: pilot design and channel estimation experiments.

#include "pilotopt/emit.hpp"
#include "pilotopt/errors.hpp"
#include "pilotopt/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace pilotopt;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CliOptions {
    std::string profile = "desk";
    std::optional<int> m;
    std::optional<int> k;
    std::string n;
    std::string snr_db;
    std::optional<std::size_t> trials;
    std::uint64_t seed = 1;
    std::string gains;
    std::string power = "1";
    std::string init = "dft-reuse";
    std::string mode = "both";
    std::string receiver = "standard";
    double tol = kDefaultTol;
    int max_sweeps = kDefaultMaxSweeps;
    unsigned workers = 1;
    bool analytic_only = false;
    std::string out;
    std::string format = "csv";
};

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::istringstream is(item);
        T v{};
        std::string rest;
        if (!(is >> v) || (is >> rest)) throw ConfigError(std::string("bad ") + what + " value '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(std::string("empty ") + what + " list");
    return out;
}

void add_common(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--profile", o.profile, "desk (M=32,K=8,N=4) or paper (M=128,K=32,N=16)")
        ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--m", o.m, "BS antennas");
    cmd->add_option("--k", o.k, "users");
    cmd->add_option("--n", o.n, "pilot length (comma list for sweep-n)");
    cmd->add_option("--snr-db", o.snr_db, "comma-separated SNR values in dB");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--gains", o.gains, "gains file, or 'paper' for the built-in table");
    cmd->add_option("--power", o.power, "per-user pilot energy: a value or a file with K lines");
    cmd->add_option("--init", o.init, "dft-reuse | dft-k | random");
    cmd->add_option("--mode", o.mode, "proposed | conventional | both");
    cmd->add_option("--receiver", o.receiver, "baseline scalar: standard | aware")
        ->check(CLI::IsMember({"standard", "aware"}));
    cmd->add_option("--tol", o.tol, "relative objective decrease per sweep that stops the optimizer");
    cmd->add_option("--max-sweeps", o.max_sweeps, "optimizer sweep cap");
    cmd->add_option("--workers", o.workers, "Monte Carlo worker threads");
    cmd->add_flag("--analytic-only", o.analytic_only, "skip Monte Carlo, report closed forms only");
    cmd->add_option("--out", o.out, "output path (stdout when omitted)");
    cmd->add_option("--format", o.format, "csv | json | svg");
}

ExperimentConfig resolve(const CliOptions& o, bool n_is_list) {
    ExperimentConfig exp = o.profile == "paper" ? ExperimentConfig::paper_profile() : ExperimentConfig::desk_profile();
    if (o.m) exp.base.M = *o.m;
    if (o.k) exp.base.K = *o.k;
    const int K = exp.base.K;
    if (K < 1) throw ConfigError("--k must be >= 1");

    if (!o.n.empty()) {
        const auto ns = parse_list<int>(o.n, "--n");
        if (n_is_list) {
            exp.n_list = ns;
        } else {
            if (ns.size() != 1) throw ConfigError("--n takes a single value for this command");
            exp.base.N = ns.front();
        }
    } else if (n_is_list) {
        std::erase_if(exp.n_list, [K](int n) { return n > K; });
        if (exp.n_list.empty() || exp.n_list.back() != K) exp.n_list.push_back(K);
    }
    if (!o.snr_db.empty()) exp.snr_db_list = parse_list<double>(o.snr_db, "--snr-db");
    if (o.trials) exp.trials = *o.trials;
    exp.seed = o.seed;

    if (o.gains == "paper") {
        exp.base.gains = paper_gains();
    } else if (!o.gains.empty()) {
        exp.base.gains = load_gains(o.gains);
    } else {
        const auto table = paper_gains();
        if (K > static_cast<int>(table.size())) {
            throw ConfigError("K > 32 needs an explicit --gains file");
        }
        exp.base.gains.assign(table.begin(), table.begin() + K);
    }
    if (static_cast<int>(exp.base.gains.size()) != K) {
        throw ConfigError("gains list has " + std::to_string(exp.base.gains.size()) + " entries, K = " +
                          std::to_string(K));
    }

    std::istringstream pv(o.power);
    double p = 0.0;
    std::string rest;
    if ((pv >> p) && !(pv >> rest)) {
        exp.base.powers.assign(K, p);
    } else {
        exp.base.powers = load_gains(o.power);
        if (static_cast<int>(exp.base.powers.size()) != K) throw ConfigError("power file needs K values");
    }

    exp.init = parse_init(o.init);
    exp.mode = parse_mode(o.mode);
    exp.receiver = o.receiver == "aware" ? BaselineReceiver::ContaminationAware : BaselineReceiver::Standard;
    exp.tol = o.tol;
    exp.max_sweeps = o.max_sweeps;
    exp.workers = o.workers;
    exp.empirical = !o.analytic_only;
    exp.validate();
    return exp;
}

void write_sweep(const CliOptions& o, const std::vector<SweepRow>& rows, const std::string& title) {
    const OutputFormat format = parse_format(o.format);
    for (const SweepRow& r : rows) {
        if (!r.self_consistent()) {
            std::cerr << "warning: " << r.algorithm << " at N=" << r.n << ", " << r.snr_db
                      << " dB: empirical WSMSE is more than 4 standard errors from the analytic value\n";
        }
    }
    if (!o.out.empty()) return emit_sweep(o.out, format, rows, title);
    switch (format) {
    case OutputFormat::Csv: write_sweep_csv(std::cout, rows); break;
    case OutputFormat::Json: write_sweep_json(std::cout, rows); break;
    case OutputFormat::Svg: write_sweep_svg(std::cout, rows, title); break;
    }
}

SystemConfig point_config(const ExperimentConfig& exp) {
    SystemConfig cfg = exp.base;
    cfg.sigma2 = sigma2_from_snr(exp.snr_db_list.front(), cfg.powers);
    cfg.validate();
    return cfg;
}

int run_sweep_snr(const CliOptions& o) {
    const ExperimentConfig exp = resolve(o, false);
    write_sweep(o, sweep_snr(exp), "Normalized WSMSE vs SNR");
    return 0;
}

int run_sweep_n(const CliOptions& o) {
    const ExperimentConfig exp = resolve(o, true);
    write_sweep(o, sweep_pilot_length(exp), "Normalized WSMSE vs SNR for several pilot lengths");
    return 0;
}

int run_convergence(const CliOptions& o) {
    CliOptions opts = o;
    if (opts.snr_db.empty()) opts.snr_db = "0";
    const ExperimentConfig exp = resolve(opts, false);
    if (exp.snr_db_list.size() != 1) throw ConfigError("convergence takes a single --snr-db value");
    const auto series = convergence_trace(exp);
    for (const auto& s : series) {
        std::cerr << to_string(s.init) << ": " << s.trace.objective_per_update.size() << " updates, "
                  << s.trace.sweeps_completed << " sweeps, final objective " << s.trace.objective_per_update.back()
                  << '\n';
    }
    const OutputFormat format = parse_format(o.format);
    const std::string title = "Optimizer convergence";
    if (!o.out.empty()) {
        emit_convergence(o.out, format, series, title);
        return 0;
    }
    switch (format) {
    case OutputFormat::Csv: write_convergence_csv(std::cout, series); break;
    case OutputFormat::Json: write_convergence_json(std::cout, series); break;
    case OutputFormat::Svg: write_convergence_svg(std::cout, series, title); break;
    }
    return 0;
}

int run_optimize(const CliOptions& o) {
    CliOptions opts = o;
    if (opts.snr_db.empty()) opts.snr_db = "0";
    const ExperimentConfig exp = resolve(opts, false);
    const SystemConfig cfg = point_config(exp);
    const OptimizeResult r = optimize_pilots(cfg, initial_pilots(cfg, exp.init, exp.seed), exp.tol, exp.max_sweeps);
    std::cerr << "objective " << r.trace.initial_objective << " -> " << r.trace.objective_per_update.back() << " in "
              << r.trace.sweeps_completed << " sweeps" << (r.trace.converged ? "" : " (not converged)")
              << ", normalized WSMSE " << analytic_wsmse(r.pilots, cfg).normalized << '\n';
    if (o.out.empty()) {
        write_pilots(std::cout, r.pilots);
    } else {
        save_pilots(o.out, r.pilots);
    }
    return 0;
}

int run_estimate(const CliOptions& o) {
    CliOptions opts = o;
    if (opts.snr_db.empty()) opts.snr_db = "10";
    const ExperimentConfig exp = resolve(opts, false);
    const SystemConfig cfg = point_config(exp);

    RandomStream channel_stream(exp.seed, 0);
    RandomStream noise_stream(exp.seed, kNoiseStreamOffset);
    const ChannelMatrix h = generate_channel(cfg, channel_stream);
    const CMatrix noise = generate_noise(cfg, noise_stream);

    const PilotMatrix optimized =
        optimize_pilots(cfg, initial_pilots(cfg, exp.init, exp.seed), exp.tol, exp.max_sweeps).pilots;
    const ChannelMatrix proposed = proposed_estimate(received_pilot_signal(h, optimized, noise), optimized, cfg);

    std::optional<ChannelMatrix> baseline;
    if (cfg.uniform_power()) {
        const ReusePilots reuse = design_reuse_pilots(cfg.N, cfg.K, cfg.powers);
        const BaselineReceiver receiver = exp.receiver;
        baseline = conventional_estimate(received_pilot_signal(h, reuse.pilots, noise), reuse.pilots, cfg, receiver);
    }

    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw std::runtime_error("cannot open " + o.out + " for writing");
    }
    std::ostream& os = o.out.empty() ? std::cout : file;
    os << "user,gain,proposed_error,conventional_error\n";
    char buf[160];
    for (int k = 0; k < cfg.K; ++k) {
        const double scale = cfg.gains[k] * cfg.M;
        const double ep = (proposed.h.col(k) - h.h.col(k)).squaredNorm() / scale;
        const double ec = baseline ? (baseline->h.col(k) - h.h.col(k)).squaredNorm() / scale : NAN;
        std::snprintf(buf, sizeof buf, "%d,%.6g,%.9g,%.9g\n", k + 1, cfg.gains[k], ep, ec);
        os << buf;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pilot design and channel estimation for multiuser massive MIMO"};
    app.require_subcommand(1);
    CliOptions opts;

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const CliOptions&);
    };
    const Command commands[] = {
        {"sweep-snr", "normalized WSMSE against SNR at fixed N", run_sweep_snr},
        {"sweep-n", "normalized WSMSE against SNR for several pilot lengths", run_sweep_n},
        {"convergence", "optimizer traces from three initializations", run_convergence},
        {"optimize", "emit an optimized pilot matrix", run_optimize},
        {"estimate", "single-shot estimation demo", run_estimate},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, opts);
        subs.emplace_back(sub, &c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        for (const auto& [sub, cmd] : subs) {
            if (sub->parsed()) return cmd->run(opts);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ContractViolation& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
