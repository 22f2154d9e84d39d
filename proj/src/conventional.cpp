// SPDX-License-Identifier: Apache-2.0
#include "pilotopt/conventional.hpp"

#include "pilotopt/errors.hpp"

#include <cmath>
#include <numbers>

namespace pilotopt {

namespace {

double uniform_energy(const PilotMatrix& x) {
    const double p = x.energy(0);
    for (Eigen::Index k = 1; k < x.users(); ++k) {
        if (std::abs(x.energy(k) - p) > 1e-9 * p) {
            throw ConfigError("baseline estimator needs pilots of equal energy");
        }
    }
    if (!(p > 0.0)) throw ConfigError("baseline estimator needs non-zero pilots");
    return p;
}

double clash_gain(const SystemConfig& cfg, const ReuseMap& reuse, int k) {
    double sum = 0.0;
    for (int i : reuse.clashes(k)) sum += cfg.gains[i];
    return sum;
}

void require_uniform(const SystemConfig& cfg) {
    if (!cfg.uniform_power()) {
        throw ConfigError("baseline pilots need equal power budgets: reused pilots would not be collinear");
    }
}

} // namespace

CMatrix unitary_dft(int n) {
    if (n < 1) throw ContractViolation("unitary_dft: size must be positive");
    CMatrix u(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            // Reduce the exponent first so large n keeps full phase accuracy.
            const long e = (static_cast<long>(r) * c) % n;
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(e) / n;
            u(r, c) = std::polar(scale, phase);
        }
    }
    return u;
}

ReuseMap reuse_map_for(int N, int K) {
    if (N < 1 || K < 1) throw ContractViolation("reuse_map_for: N and K must be positive");
    ReuseMap map;
    map.clash_sets.resize(K);
    for (int k = 0; k < K; ++k) {
        for (int i = k % N; i < K; i += N) {
            if (i != k) map.clash_sets[k].push_back(i);
        }
    }
    return map;
}

ReuseMap reuse_map_from_pilots(const PilotMatrix& x) {
    const int K = static_cast<int>(x.users());
    ReuseMap map;
    map.clash_sets.resize(K);
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < K; ++i) {
            if (i == k) continue;
            const double overlap = std::abs(x.column(i).dot(x.column(k)));
            if (overlap >= (1.0 - 1e-9) * std::sqrt(x.energy(i) * x.energy(k)) && overlap > 0.0) {
                map.clash_sets[k].push_back(i);
            }
        }
    }
    return map;
}

ReusePilots design_reuse_pilots(int N, int K, const std::vector<double>& powers) {
    if (N < 1 || K < 1) throw ConfigError("design_reuse_pilots: N and K must be positive");
    if (static_cast<int>(powers.size()) != K) throw ConfigError("design_reuse_pilots: need one power per user");
    SystemConfig probe;
    probe.powers = powers;
    require_uniform(probe);
    const CMatrix u = unitary_dft(N);
    CMatrix x(N, K);
    for (int k = 0; k < K; ++k) x.col(k) = std::sqrt(powers[k]) * u.col(k % N);
    return {PilotMatrix(std::move(x)), reuse_map_for(N, K)};
}

double baseline_scalar(const SystemConfig& cfg, const ReuseMap& reuse, int k, BaselineReceiver receiver) {
    const double p = cfg.powers[k];
    const double g = cfg.gains[k];
    const double contaminating = receiver == BaselineReceiver::ContaminationAware ? clash_gain(cfg, reuse, k) : 0.0;
    const double denom = p * (g + contaminating) + cfg.sigma2;
    if (!(denom > 0.0)) throw SingularMatrixError("baseline_scalar: zero denominator", denom);
    return g / denom;
}

CMatrix conventional_estimator_matrix(const PilotMatrix& x, const SystemConfig& cfg, const ReuseMap& reuse,
                                      BaselineReceiver receiver) {
    if (x.users() != cfg.K || x.length() != cfg.N) throw ContractViolation("pilot shape does not match config");
    CMatrix e = x.matrix();
    for (int k = 0; k < cfg.K; ++k) e.col(k) *= baseline_scalar(cfg, reuse, k, receiver);
    return e;
}

ChannelMatrix conventional_estimate(const ReceivedSignal& y, const PilotMatrix& x, const SystemConfig& cfg,
                                    BaselineReceiver receiver) {
    if (y.y.cols() != x.length() || y.y.rows() != cfg.M) throw ContractViolation("received block shape mismatch");
    const double p = uniform_energy(x);
    SystemConfig effective = cfg;
    effective.powers.assign(cfg.K, p);
    const CMatrix e = conventional_estimator_matrix(x, effective, reuse_map_from_pilots(x), receiver);
    return {y.y * e};
}

WsmseReport conventional_analytic_wsmse(const SystemConfig& cfg, const ReuseMap& reuse, BaselineReceiver receiver) {
    require_uniform(cfg);
    if (static_cast<int>(reuse.clash_sets.size()) != cfg.K) throw ContractViolation("reuse map size mismatch");
    WsmseReport report;
    report.per_user.resize(cfg.K);
    double sum = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        const double p = cfg.powers[k];
        const double g = cfg.gains[k];
        const double c = baseline_scalar(cfg, reuse, k, receiver);
        const double bias = c * p - 1.0;
        const double mse = bias * bias * g + c * c * (p * p * clash_gain(cfg, reuse, k) + cfg.sigma2 * p);
        report.per_user[k] = mse / g;
        sum += report.per_user[k];
    }
    report.normalized = sum / cfg.K;
    return report;
}

} // namespace pilotopt
