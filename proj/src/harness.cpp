// SPDX-License-Identifier: Apache-2.0
#include "pilotopt/harness.hpp"

#include "pilotopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace pilotopt {

Mode parse_mode(const std::string& name) {
    if (name == "proposed") return Mode::Proposed;
    if (name == "conventional") return Mode::Conventional;
    if (name == "both") return Mode::Both;
    throw ConfigError("unknown mode '" + name + "' (expected proposed, conventional or both)");
}

std::string to_string(Estimator e) { return e == Estimator::Proposed ? "proposed" : "conventional"; }

WsmseReport run_monte_carlo(const SystemConfig& cfg, const PilotMatrix& x, Estimator estimator,
                            const MonteCarloOptions& opts) {
    cfg.validate();
    if (opts.trials < 1) throw ConfigError("run_monte_carlo: trials must be >= 1");
    if (x.length() != cfg.N || x.users() != cfg.K) throw ContractViolation("run_monte_carlo: pilot shape mismatch");

    // Both estimators are linear in Y: H_hat = Y E.
    const CMatrix e = estimator == Estimator::Proposed
                          ? proposed_estimator_matrix(x, cfg)
                          : conventional_estimator_matrix(x, cfg, reuse_map_from_pilots(x), opts.receiver);
    const CMatrix x_adj = x.matrix().adjoint();

    const std::size_t trials = opts.trials;
    const std::size_t users = static_cast<std::size_t>(cfg.K);
    std::vector<double> errors(trials * users);

    auto run_range = [&](std::size_t first, std::size_t last) {
        for (std::size_t t = first; t < last; ++t) {
            RandomStream channel_stream(opts.seed, t);
            RandomStream noise_stream(opts.seed, t + kNoiseStreamOffset);
            const ChannelMatrix h = generate_channel(cfg, channel_stream);
            const CMatrix noise = generate_noise(cfg, noise_stream);
            const CMatrix estimate = (h.h * x_adj + noise) * e;
            for (std::size_t k = 0; k < users; ++k) {
                const auto col = static_cast<Eigen::Index>(k);
                errors[t * users + k] =
                    (estimate.col(col) - h.h.col(col)).squaredNorm() / (cfg.gains[k] * cfg.M);
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(trials)));
    if (workers == 1) {
        run_range(0, trials);
    } else {
        std::exception_ptr failure;
        std::mutex failure_mutex;
        {
            std::vector<std::jthread> pool;
            const std::size_t chunk = (trials + workers - 1) / workers;
            for (unsigned w = 0; w < workers; ++w) {
                const std::size_t first = w * chunk;
                const std::size_t last = std::min(trials, first + chunk);
                if (first >= last) break;
                pool.emplace_back([&, first, last] {
                    try {
                        run_range(first, last);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                });
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    WsmseReport report;
    report.trials = trials;
    report.per_user.assign(users, 0.0);
    std::vector<double> per_trial(trials, 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
        double sum = 0.0;
        for (std::size_t k = 0; k < users; ++k) {
            sum += errors[t * users + k];
            report.per_user[k] += errors[t * users + k];
        }
        per_trial[t] = sum / static_cast<double>(users);
    }
    for (double& v : report.per_user) v /= static_cast<double>(trials);

    double mean = 0.0;
    for (double v : per_trial) mean += v;
    mean /= static_cast<double>(trials);
    report.normalized = mean;
    if (trials > 1) {
        double ss = 0.0;
        for (double v : per_trial) ss += (v - mean) * (v - mean);
        report.std_error = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
    }
    return report;
}

std::vector<double> default_snr_grid() {
    std::vector<double> grid;
    for (int s = -10; s <= 20; s += 2) grid.push_back(s);
    return grid;
}

void ExperimentConfig::validate() const {
    SystemConfig probe = base;
    probe.sigma2 = 1.0;
    probe.validate();
    if (snr_db_list.empty()) throw ConfigError("SNR list is empty");
    for (double s : snr_db_list) {
        if (!std::isfinite(s)) throw ConfigError("SNR values must be finite");
    }
    if (empirical && trials < 1) throw ConfigError("trials must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (max_sweeps < 1) throw ConfigError("max_sweeps must be >= 1");
    if (!(tol >= 0.0)) throw ConfigError("tolerance must be >= 0");
}

ExperimentConfig ExperimentConfig::desk_profile() {
    ExperimentConfig exp;
    exp.base.M = 32;
    exp.base.K = 8;
    exp.base.N = 4;
    const auto gains = paper_gains();
    exp.base.gains.assign(gains.begin(), gains.begin() + 8);
    exp.base.powers.assign(8, 1.0);
    exp.snr_db_list = default_snr_grid();
    exp.n_list = {1, 2, 4, 8};
    exp.trials = 5000;
    return exp;
}

ExperimentConfig ExperimentConfig::paper_profile() {
    ExperimentConfig exp;
    exp.base.M = 128;
    exp.base.K = 32;
    exp.base.N = 16;
    exp.base.gains = paper_gains();
    exp.base.powers.assign(32, 1.0);
    exp.snr_db_list = default_snr_grid();
    exp.n_list = {1, 2, 4, 8, 16, 32};
    exp.trials = 20000;
    return exp;
}

bool SweepRow::self_consistent(double sigmas) const {
    if (!wsmse_empirical || !std_error) return true;
    return std::abs(*wsmse_empirical - wsmse_analytic) <= sigmas * *std_error;
}

std::vector<SweepRow> evaluate_point(const ExperimentConfig& exp, int n, double snr_db) {
    SystemConfig cfg = exp.base;
    cfg.N = n;
    cfg.sigma2 = sigma2_from_snr(snr_db, cfg.powers);
    cfg.validate();

    const MonteCarloOptions mc{exp.trials, exp.seed, exp.workers, exp.receiver};
    std::vector<SweepRow> rows;

    if (exp.mode != Mode::Proposed) {
        const ReusePilots baseline = design_reuse_pilots(n, cfg.K, cfg.powers);
        SweepRow row;
        row.snr_db = snr_db;
        row.n = n;
        row.algorithm = exp.receiver == BaselineReceiver::Standard ? "conventional" : "conventional-aware";
        row.wsmse_analytic = conventional_analytic_wsmse(cfg, baseline.reuse, exp.receiver).normalized;
        if (exp.empirical) {
            const WsmseReport r = run_monte_carlo(cfg, baseline.pilots, Estimator::Conventional, mc);
            row.wsmse_empirical = r.normalized;
            row.std_error = r.std_error;
            row.trials = r.trials;
        }
        rows.push_back(std::move(row));
    }

    if (exp.mode != Mode::Conventional) {
        const PilotMatrix init = initial_pilots(cfg, exp.init, exp.seed);
        const OptimizeResult opt = optimize_pilots(cfg, init, exp.tol, exp.max_sweeps);
        SweepRow row;
        row.snr_db = snr_db;
        row.n = n;
        row.algorithm = "proposed";
        row.wsmse_analytic = analytic_wsmse(opt.pilots, cfg).normalized;
        row.sweeps = opt.trace.sweeps_completed;
        if (exp.empirical) {
            const WsmseReport r = run_monte_carlo(cfg, opt.pilots, Estimator::Proposed, mc);
            row.wsmse_empirical = r.normalized;
            row.std_error = r.std_error;
            row.trials = r.trials;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> sweep_snr(const ExperimentConfig& exp) {
    exp.validate();
    std::vector<SweepRow> rows;
    for (double snr : exp.snr_db_list) {
        auto point = evaluate_point(exp, exp.base.N, snr);
        rows.insert(rows.end(), point.begin(), point.end());
    }
    return rows;
}

std::vector<SweepRow> sweep_pilot_length(const ExperimentConfig& exp) {
    exp.validate();
    if (exp.n_list.empty()) throw ConfigError("pilot-length list is empty");
    for (int n : exp.n_list) {
        if (n < 1 || n > exp.base.K) {
            throw ConfigError("pilot length " + std::to_string(n) + " outside [1, K=" + std::to_string(exp.base.K) + "]");
        }
    }
    std::vector<SweepRow> rows;
    for (int n : exp.n_list) {
        for (double snr : exp.snr_db_list) {
            auto point = evaluate_point(exp, n, snr);
            rows.insert(rows.end(), point.begin(), point.end());
        }
    }
    return rows;
}

std::vector<ConvergenceSeries> convergence_trace(const ExperimentConfig& exp) {
    exp.validate();
    std::vector<ConvergenceSeries> out;
    for (double snr : exp.snr_db_list) {
        SystemConfig cfg = exp.base;
        cfg.sigma2 = sigma2_from_snr(snr, cfg.powers);
        for (InitScheme scheme : {InitScheme::DftReuse, InitScheme::DftTruncated, InitScheme::Random}) {
            const PilotMatrix init = initial_pilots(cfg, scheme, exp.seed);
            out.push_back({snr, scheme, optimize_pilots(cfg, init, exp.tol, exp.max_sweeps).trace});
        }
    }
    return out;
}

} // namespace pilotopt
