// SPDX-License-Identifier: Apache-2.0
#include "pilotopt/optimizer.hpp"

#include "pilotopt/conventional.hpp"
#include "pilotopt/errors.hpp"

#include <cmath>
#include <numbers>

namespace pilotopt {

namespace {

void require_shape(const PilotMatrix& x, const SystemConfig& cfg) {
    if (x.length() != cfg.N || x.users() != cfg.K) {
        throw ContractViolation("pilot matrix is " + std::to_string(x.length()) + "x" + std::to_string(x.users()) +
                                ", config expects " + std::to_string(cfg.N) + "x" + std::to_string(cfg.K));
    }
    if (static_cast<int>(cfg.gains.size()) != cfg.K || static_cast<int>(cfg.powers.size()) != cfg.K) {
        throw ContractViolation("config gains/powers do not match K");
    }
}

void require_user(int k, const SystemConfig& cfg) {
    if (k < 0 || k >= cfg.K) throw ContractViolation("user index " + std::to_string(k) + " out of range");
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

void scale_to_budget(CVector& v, double power) {
    const double norm = v.norm();
    if (!(norm > 0.0)) throw NumericalError("cannot scale a zero pilot column to its budget");
    v *= std::sqrt(power) / norm;
}

} // namespace

CMatrix gram_matrix(const PilotMatrix& x, const SystemConfig& cfg) {
    require_shape(x, cfg);
    const auto& xm = x.matrix();
    const Eigen::Map<const RVector> gains(cfg.gains.data(), cfg.K);
    CMatrix a = xm * gains.asDiagonal() * xm.adjoint();
    a.diagonal().array() += cfg.sigma2;
    a = hermitian_part(a);
    if (!(cfg.sigma2 > 0.0)) {
        // Without noise A is only as good as the pilots' span.
        const RVector values = Eigen::SelfAdjointEigenSolver<CMatrix>(a, Eigen::EigenvaluesOnly).eigenvalues();
        if (!(values.minCoeff() > kSingularRatio * values.maxCoeff())) {
            throw SingularMatrixError("gram_matrix: noiseless A is singular", values.minCoeff());
        }
    }
    return a;
}

double objective(const PilotMatrix& x, const SystemConfig& cfg) { return trace_inverse(gram_matrix(x, cfg)); }

CMatrix leave_one_out(const PilotMatrix& x, int k, const SystemConfig& cfg) {
    require_shape(x, cfg);
    require_user(k, cfg);
    const auto& xm = x.matrix();
    CMatrix q = CMatrix::Identity(cfg.N, cfg.N) * cfg.sigma2;
    for (int i = 0; i < cfg.K; ++i) {
        if (i != k) q += cfg.gains[i] * xm.col(i) * xm.col(i).adjoint();
    }
    return hermitian_part(q);
}

RayleighUpdate rayleigh_update(const PilotMatrix& x, int k, const SystemConfig& cfg) {
    const CMatrix q = leave_one_out(x, k, cfg);
    const double g = cfg.gains[k];
    const double p = cfg.powers[k];
    const Eigen::Index n = cfg.N;

    const CMatrix q_inv = hermitian_part(solve_hermitian(q, CMatrix::Identity(n, n)));
    const CMatrix f = hermitian_part(g * q_inv + CMatrix::Identity(n, n) / p);
    const CMatrix f_inv_sqrt = inv_sqrt_psd(f);
    const CMatrix b = hermitian_part(g * f_inv_sqrt * q_inv * q_inv * f_inv_sqrt);
    const HermitianEig eig = hermitian_eig(b);

    const double top = eig.values(n - 1);
    Eigen::Index top_dim = 1;
    while (top_dim < n && top - eig.values(n - 1 - top_dim) < kDegenerateGap * std::abs(top)) ++top_dim;

    RayleighUpdate out;
    if (top_dim == 1) {
        out.column = f_inv_sqrt * eig.vectors.col(n - 1);
    } else {
        out.degenerate = true;
        const CVector previous = x.column(k);
        const auto basis = eig.vectors.rightCols(top_dim);
        // Whitened incumbent F^{1/2} x, projected onto the optimal eigenspace.
        const CVector whitened = f * (f_inv_sqrt * previous);
        const CVector projected = basis * (basis.adjoint() * whitened);
        if (whitened.norm() > 0.0 && projected.norm() > 1e-8 * whitened.norm()) {
            out.column = f_inv_sqrt * projected;
            if ((out.column.normalized() - previous.normalized()).norm() < 1e-8) out.column = previous;
        } else {
            out.column = f_inv_sqrt * eig.vectors.col(n - 1);
        }
    }
    scale_to_budget(out.column, p);
    return out;
}

OptimizeResult optimize_pilots(const SystemConfig& cfg, const PilotMatrix& init, double tol, int max_sweeps) {
    cfg.validate();
    if (!(cfg.sigma2 > 0.0)) throw ConfigError("optimize_pilots: noise variance must be > 0");
    if (!(tol >= 0.0)) throw ConfigError("optimize_pilots: tolerance must be >= 0");
    if (max_sweeps < 1) throw ConfigError("optimize_pilots: max_sweeps must be >= 1");
    require_shape(init, cfg);
    init.check_budgets(cfg.powers);

    OptimizeResult result{init, {}};
    OptimizerTrace& trace = result.trace;
    trace.initial_objective = objective(result.pilots, cfg);
    trace.objective_per_update.reserve(static_cast<std::size_t>(cfg.K) * 4);

    double sweep_start = trace.initial_objective;
    while (trace.sweeps_completed < max_sweeps) {
        for (int k = 0; k < cfg.K; ++k) {
            const RayleighUpdate update = rayleigh_update(result.pilots, k, cfg);
            result.pilots.set_column(k, update.column);
            if (update.degenerate) ++trace.degenerate_updates;
            const double value = objective(result.pilots, cfg);
            trace.objective_per_update.push_back(value);
            if (!std::isfinite(value)) {
                throw NumericalError("optimize_pilots: non-finite objective", trace.objective_per_update.size(),
                                     trace.objective_per_update);
            }
        }
        ++trace.sweeps_completed;
        const double sweep_end = trace.objective_per_update.back();
        if ((sweep_start - sweep_end) < tol * sweep_start) {
            trace.converged = true;
            break;
        }
        sweep_start = sweep_end;
    }
    return result;
}

PilotMatrix closed_form_n1(const SystemConfig& cfg) {
    if (cfg.N != 1) throw ContractViolation("closed_form_n1 requires N = 1");
    cfg.validate();
    CMatrix x(1, cfg.K);
    for (int k = 0; k < cfg.K; ++k) x(0, k) = Complex(std::sqrt(cfg.powers[k]), 0.0);
    return PilotMatrix(std::move(x));
}

PilotMatrix closed_form_nk(const SystemConfig& cfg) {
    if (cfg.N != cfg.K) throw ContractViolation("closed_form_nk requires N = K");
    cfg.validate();
    CMatrix x = unitary_dft(cfg.N);
    for (int k = 0; k < cfg.K; ++k) x.col(k) *= std::sqrt(cfg.powers[k]);
    return PilotMatrix(std::move(x));
}

InitScheme parse_init(const std::string& name) {
    if (name == "dft-reuse") return InitScheme::DftReuse;
    if (name == "dft-k" || name == "dft-k-truncated") return InitScheme::DftTruncated;
    if (name == "random") return InitScheme::Random;
    throw ConfigError("unknown initialization '" + name + "' (expected dft-reuse, dft-k or random)");
}

std::string to_string(InitScheme scheme) {
    switch (scheme) {
    case InitScheme::DftReuse: return "dft-reuse";
    case InitScheme::DftTruncated: return "dft-k";
    case InitScheme::Random: return "random";
    }
    return "unknown";
}

PilotMatrix initial_pilots(const SystemConfig& cfg, InitScheme scheme, std::uint64_t seed) {
    cfg.validate();
    CMatrix x(cfg.N, cfg.K);
    switch (scheme) {
    case InitScheme::DftReuse: {
        const CMatrix u = unitary_dft(cfg.N);
        for (int k = 0; k < cfg.K; ++k) x.col(k) = u.col(k % cfg.N);
        break;
    }
    case InitScheme::DftTruncated:
        for (int k = 0; k < cfg.K; ++k) {
            for (int r = 0; r < cfg.N; ++r) {
                const long e = (static_cast<long>(r) * k) % cfg.K;
                x(r, k) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(e) / cfg.K);
            }
        }
        break;
    case InitScheme::Random: {
        RandomStream stream(seed, 0);
        x = draw_cn(stream, cfg.N, cfg.K);
        break;
    }
    }
    for (int k = 0; k < cfg.K; ++k) {
        CVector column = x.col(k);
        scale_to_budget(column, cfg.powers[k]);
        x.col(k) = column;
    }
    return PilotMatrix(std::move(x));
}

CVector combiner_u(const PilotMatrix& x, int k, const SystemConfig& cfg) {
    require_user(k, cfg);
    const CMatrix a = gram_matrix(x, cfg);
    return cfg.gains[k] * solve_hermitian(a, x.column(k));
}

Complex receiver_scalar(const PilotMatrix& x, const CVector& u, int k, const SystemConfig& cfg) {
    require_user(k, cfg);
    if (u.size() != cfg.N) throw ContractViolation("receiver_scalar: combiner length mismatch");
    const CMatrix a = gram_matrix(x, cfg);
    const Complex denom = u.dot(a * u);
    if (!(std::abs(denom) > 0.0)) throw ContractViolation("receiver_scalar: zero combiner energy");
    return cfg.gains[k] * x.column(k).dot(u) / denom.real();
}

CMatrix proposed_estimator_matrix(const PilotMatrix& x, const SystemConfig& cfg) {
    const CMatrix a = gram_matrix(x, cfg);
    const CMatrix solved = solve_hermitian(a, x.matrix());
    CMatrix e(cfg.N, cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        const CVector u = cfg.gains[k] * solved.col(k);
        const Complex denom = u.dot(a * u);
        if (!(std::abs(denom) > 0.0)) throw ContractViolation("proposed estimator: zero combiner for a user");
        const Complex c = cfg.gains[k] * x.column(k).dot(u) / denom.real();
        e.col(k) = std::conj(c) * u;
    }
    return e;
}

ChannelMatrix proposed_estimate(const ReceivedSignal& y, const PilotMatrix& x, const SystemConfig& cfg) {
    if (y.y.cols() != cfg.N || y.y.rows() != cfg.M) throw ContractViolation("received block shape mismatch");
    return {y.y * proposed_estimator_matrix(x, cfg)};
}

WsmseReport analytic_wsmse(const PilotMatrix& x, const SystemConfig& cfg) {
    const CMatrix a = gram_matrix(x, cfg);
    const CMatrix solved = solve_hermitian(a, x.matrix());
    WsmseReport report;
    report.per_user.resize(cfg.K);
    double sum = 0.0;
    for (int k = 0; k < cfg.K; ++k) {
        report.per_user[k] = 1.0 - cfg.gains[k] * x.column(k).dot(solved.col(k)).real();
        sum += report.per_user[k];
    }
    report.normalized = sum / cfg.K;
    return report;
}

double wsmse_from_objective(double trace_inv, const SystemConfig& cfg) {
    return 1.0 - static_cast<double>(cfg.N) / cfg.K + cfg.sigma2 / cfg.K * trace_inv;
}

} // namespace pilotopt
