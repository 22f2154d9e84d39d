// SPDX-License-Identifier: Apache-2.0
#include "pilotopt/conventional.hpp"
#include "pilotopt/errors.hpp"
#include "pilotopt/optimizer.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace pilotopt;
using testing::random_config;
using testing::random_pilots;

namespace {

SystemConfig make_config(int K, int N, double sigma2, std::vector<double> gains, std::vector<double> powers = {}) {
    SystemConfig cfg;
    cfg.M = 4;
    cfg.K = K;
    cfg.N = N;
    cfg.sigma2 = sigma2;
    cfg.gains = std::move(gains);
    cfg.powers = powers.empty() ? std::vector<double>(K, 1.0) : std::move(powers);
    return cfg;
}

PilotMatrix single(Complex v) {
    CMatrix x(1, 1);
    x(0, 0) = v;
    return PilotMatrix(x);
}

// |<a, b>| / (|a| |b|)
double alignment(const CVector& a, const CVector& b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }

double sum_inverse(const SystemConfig& cfg) {
    double s = 0.0;
    for (int k = 0; k < cfg.K; ++k) s += 1.0 / (cfg.gains[k] * cfg.powers[k] + cfg.sigma2);
    return s;
}

std::vector<double> weights(const SystemConfig& cfg) {
    std::vector<double> w;
    for (int k = 0; k < cfg.K; ++k) w.push_back(cfg.gains[k] * cfg.powers[k]);
    return w;
}

// Generalized Rayleigh quotient maximized by user k's update.
double combiner_ratio(const PilotMatrix& x, const CVector& u, int k, const SystemConfig& cfg) {
    const CMatrix a = gram_matrix(x, cfg);
    const double g = cfg.gains[k];
    return g * g * std::norm(x.column(k).dot(u)) / u.dot(a * u).real();
}

} // namespace

TEST_CASE("gram_matrix") {
    SUBCASE("zero pilots") {
        const SystemConfig cfg = make_config(3, 2, 0.4, {1, 1, 1});
        const CMatrix a = gram_matrix(PilotMatrix(CMatrix::Zero(2, 3)), cfg);
        CHECK((a - 0.4 * CMatrix::Identity(2, 2)).norm() == 0.0);
    }
    SUBCASE("scalar") {
        const CMatrix a = gram_matrix(single(1.0), make_config(1, 1, 1.0, {1.0}));
        CHECK(a(0, 0) == Complex(2.0, 0.0));
    }
    SUBCASE("orthogonal pilots give eigenvalues g_k P_k + sigma2") {
        const SystemConfig cfg = make_config(3, 3, 0.3, {0.2, 0.5, 0.9}, {1.0, 2.0, 0.5});
        const CMatrix a = gram_matrix(closed_form_nk(cfg), cfg);
        const RVector eig = hermitian_eig(a).values;
        std::vector<double> expect{0.2 + 0.3, 1.0 + 0.3, 0.45 + 0.3};
        std::sort(expect.begin(), expect.end());
        for (int i = 0; i < 3; ++i) CHECK(eig(i) == doctest::Approx(expect[i]).epsilon(1e-13));
    }
    SUBCASE("noiseless rank-deficient pilots are singular") {
        const SystemConfig cfg = make_config(1, 2, 0.0, {1.0});
        CHECK_THROWS_AS(gram_matrix(PilotMatrix(CMatrix::Ones(2, 1)), cfg), SingularMatrixError);
        CHECK_THROWS_AS(gram_matrix(PilotMatrix(CMatrix::Ones(3, 1)), cfg), ContractViolation);
    }
}

TEST_CASE("objective") {
    CHECK(objective(PilotMatrix(CMatrix::Zero(3, 2)), make_config(2, 3, 0.5, {1, 1})) ==
          doctest::Approx(6.0).epsilon(1e-14));
    CHECK(objective(single(1.0), make_config(1, 1, 1.0, {1.0})) == doctest::Approx(0.5).epsilon(1e-15));
    const SystemConfig cfg = make_config(2, 2, 1.0, {1.0, 0.5});
    CHECK(objective(closed_form_nk(cfg), cfg) == doctest::Approx(7.0 / 6.0).epsilon(1e-14));

    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t) {
        const SystemConfig c = random_config(rng);
        const PilotMatrix x = random_pilots(rng, c);
        const double direct = testing::lu_inverse(gram_matrix(x, c)).trace().real();
        const double value = objective(x, c);
        CHECK(value > 0.0);
        CHECK(std::abs(value - direct) < 1e-10 * direct);
    }
}

TEST_CASE("leave_one_out") {
    CHECK((leave_one_out(single(1.0), 0, make_config(1, 1, 0.7, {1.0})) - 0.7 * CMatrix::Identity(1, 1)).norm() == 0.0);

    CMatrix x(2, 2);
    x << 0.3, 1.0, 0.8, 0.0;
    const CMatrix q = leave_one_out(PilotMatrix(x), 0, make_config(2, 2, 0.1, {1.0, 1.0}));
    CHECK(std::abs(q(0, 0) - 1.1) < 1e-15);
    CHECK(std::abs(q(1, 1) - 0.1) < 1e-15);
    CHECK(std::abs(q(0, 1)) < 1e-15);

    std::mt19937_64 rng(13);
    for (int t = 0; t < 30; ++t) {
        const SystemConfig c = random_config(rng);
        const PilotMatrix p = random_pilots(rng, c);
        const int k = testing::uniform_int(rng, 0, c.K - 1);
        const CMatrix diff = gram_matrix(p, c) - leave_one_out(p, k, c);
        const CMatrix rank_one = c.gains[k] * p.column(k) * p.column(k).adjoint();
        CHECK((diff - rank_one).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + rank_one.norm()));
        const RVector ev = hermitian_eig(diff).values;
        for (int i = 0; i + 1 < ev.size(); ++i) CHECK(std::abs(ev(i)) < 1e-10 * (1.0 + ev.cwiseAbs().maxCoeff()));
    }
    CHECK_THROWS_AS(leave_one_out(single(1.0), 1, make_config(1, 1, 1.0, {1.0})), ContractViolation);
}

TEST_CASE("rayleigh_update: picks the quietest direction") {
    CMatrix x(2, 2);
    x << 0.6, 1.0, 0.8, 0.0;
    const SystemConfig cfg = make_config(2, 2, 0.1, {1.0, 1.0});
    const RayleighUpdate u = rayleigh_update(PilotMatrix(x), 0, cfg);
    CHECK_FALSE(u.degenerate);
    CHECK(std::abs(u.column(0)) < 1e-12);
    CHECK(std::abs(u.column(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rayleigh_update: isotropic interference keeps the incumbent") {
    CMatrix x(2, 1);
    x << Complex(0.3, 0.1), Complex(0.0, -0.2);
    const SystemConfig cfg = make_config(1, 2, 0.5, {0.8}, {2.0});
    const RayleighUpdate u = rayleigh_update(PilotMatrix(x), 0, cfg);
    CHECK(u.degenerate);
    CHECK(u.column.squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(alignment(u.column, x.col(0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((u.column / u.column.norm() - x.col(0) / x.col(0).norm()).norm() < 1e-14);
}

TEST_CASE("rayleigh_update: degenerate optimum with an incumbent outside it") {
    // Users 2 and 3 sit on e1, so every direction in span{e2, e3} is optimal for user 1.
    CMatrix x = CMatrix::Zero(3, 3);
    x(0, 0) = M_SQRT1_2;
    x(1, 0) = M_SQRT1_2;
    x(0, 1) = 1.0;
    x(0, 2) = 1.0;
    const SystemConfig cfg = make_config(3, 3, 0.2, {0.5, 0.5, 0.5});
    const PilotMatrix before(x);
    const RayleighUpdate u = rayleigh_update(before, 0, cfg);
    CHECK(u.degenerate);
    CHECK(std::abs(u.column(0)) < 1e-12);
    CHECK(std::abs(u.column(1)) == doctest::Approx(1.0).epsilon(1e-12));

    PilotMatrix after = before;
    after.set_column(0, u.column);
    CHECK(objective(after, cfg) < objective(before, cfg));

    // Already inside the optimal eigenspace: left untouched.
    CMatrix inside = x;
    inside.col(0) = CVector::Zero(3);
    inside(2, 0) = Complex(0.0, 1.0);
    const RayleighUpdate kept = rayleigh_update(PilotMatrix(inside), 0, cfg);
    CHECK(kept.degenerate);
    CHECK((kept.column - inside.col(0)).norm() < 1e-14);
}

TEST_CASE("rayleigh_update: exact budget, monotone, and equal to the minimum eigenvector of Q_k") {
    std::mt19937_64 rng(14);
    int compared = 0;
    for (int t = 0; t < 200; ++t) {
        SystemConfig cfg = random_config(rng);
        if (cfg.K < 2) continue;
        cfg.N = testing::uniform_int(rng, 1, cfg.K - 1);
        const PilotMatrix x = random_pilots(rng, cfg);
        const int k = testing::uniform_int(rng, 0, cfg.K - 1);
        const RayleighUpdate u = rayleigh_update(x, k, cfg);
        CHECK(std::abs(u.column.squaredNorm() - cfg.powers[k]) < 1e-12 * std::max(1.0, cfg.powers[k]));

        PilotMatrix after = x;
        after.set_column(k, u.column);
        CHECK(objective(after, cfg) <= objective(x, cfg) + 1e-12);

        const auto q = hermitian_eig(leave_one_out(x, k, cfg));
        if (cfg.N > 1 && q.values(1) - q.values(0) < 1e-6 * q.values(0)) continue;
        CHECK(alignment(u.column, q.vectors.col(0)) > 1.0 - 1e-8);
        ++compared;
    }
    CHECK(compared >= 100);
}

TEST_CASE("optimize_pilots: N = K orthogonal start is a fixed point") {
    const SystemConfig cfg = make_config(6, 6, 0.4, {0.1, 0.9, 0.3, 0.5, 0.7, 0.2}, {1, 2, 1, 0.5, 1, 3});
    const PilotMatrix init = closed_form_nk(cfg);
    const OptimizeResult r = optimize_pilots(cfg, init);
    CHECK(r.trace.converged);
    CHECK(r.trace.sweeps_completed == 1);
    CHECK(r.trace.objective_per_update.size() == 6);
    CHECK(objective(r.pilots, cfg) == doctest::Approx(sum_inverse(cfg)).epsilon(1e-12));
    CHECK(std::abs(objective(r.pilots, cfg) - objective(init, cfg)) < 1e-10);
    for (int k = 0; k < cfg.K; ++k) CHECK(alignment(r.pilots.column(k), init.column(k)) > 1.0 - 1e-12);
}

TEST_CASE("optimize_pilots: reference scenario stops improving after two sweeps") {
    SystemConfig cfg = make_config(32, 16, 1.0, paper_gains());
    const OptimizeResult r = optimize_pilots(cfg, initial_pilots(cfg, InitScheme::DftReuse));
    REQUIRE(r.trace.converged);
    const auto& t = r.trace.objective_per_update;
    REQUIRE(t.size() >= 64);
    CHECK(std::abs(t[63] - t.back()) <= 1e-12 * t.back());
    CHECK(r.trace.sweeps_completed <= 3);
    CHECK(t.back() < r.trace.initial_objective);
}

TEST_CASE("optimize_pilots: trace never increases (property)") {
    std::mt19937_64 rng(15);
    for (int t = 0; t < 60; ++t) {
        const SystemConfig cfg = random_config(rng, 10);
        const OptimizeResult r = optimize_pilots(cfg, random_pilots(rng, cfg), 1e-10, 30);
        double previous = r.trace.initial_objective;
        for (double v : r.trace.objective_per_update) {
            CHECK(v <= previous + 1e-12);
            previous = v;
        }
        // Never better than the majorization bound, and the budgets are tight.
        CHECK(r.trace.objective_per_update.back() >=
              testing::majorization_optimum(weights(cfg), cfg.N, cfg.sigma2) * (1.0 - 1e-12));
        for (int k = 0; k < cfg.K; ++k) CHECK(r.pilots.energy(k) == doctest::Approx(cfg.powers[k]).epsilon(1e-10));
    }
}

TEST_CASE("optimize_pilots: reaches the majorization optimum from a generic start") {
    std::mt19937_64 rng(16);
    for (int t = 0; t < 10; ++t) {
        SystemConfig cfg = random_config(rng, 8);
        cfg.N = std::min(cfg.N, 3);
        const OptimizeResult r = optimize_pilots(cfg, random_pilots(rng, cfg), 1e-14, 2000);
        const double best = testing::majorization_optimum(weights(cfg), cfg.N, cfg.sigma2);
        CHECK(r.trace.objective_per_update.back() == doctest::Approx(best).epsilon(1e-6));
    }
}

TEST_CASE("optimize_pilots: errors") {
    const SystemConfig cfg = make_config(2, 2, 0.0, {1, 1});
    CHECK_THROWS_AS(optimize_pilots(cfg, closed_form_nk(make_config(2, 2, 1.0, {1, 1}))), ConfigError);
    const SystemConfig noisy = make_config(2, 2, 1.0, {1, 1});
    CHECK_THROWS_AS(optimize_pilots(noisy, PilotMatrix(CMatrix::Ones(2, 2))), ConfigError); // energy 2 > 1
    CHECK_THROWS_AS(optimize_pilots(noisy, PilotMatrix(CMatrix::Ones(3, 2) * 0.1)), ContractViolation);
    CHECK_THROWS_AS(optimize_pilots(noisy, closed_form_nk(noisy), 1e-8, 0), ConfigError);
}

TEST_CASE("closed_form_n1") {
    const SystemConfig one = make_config(1, 1, 1.0, {1.0});
    CHECK(objective(closed_form_n1(one), one) == doctest::Approx(0.5).epsilon(1e-15));
    const SystemConfig two = make_config(2, 1, 1.0, {1.0, 1.0});
    CHECK(objective(closed_form_n1(two), two) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(closed_form_n1(make_config(2, 2, 1.0, {1, 1})), ContractViolation);

    std::mt19937_64 rng(17);
    for (int t = 0; t < 20; ++t) {
        SystemConfig cfg = random_config(rng);
        cfg.N = 1;
        double total = cfg.sigma2;
        for (int k = 0; k < cfg.K; ++k) total += cfg.gains[k] * cfg.powers[k];
        const PilotMatrix cf = closed_form_n1(cfg);
        CHECK(objective(cf, cfg) == doctest::Approx(1.0 / total).epsilon(1e-13));
        const OptimizeResult it = optimize_pilots(cfg, random_pilots(rng, cfg));
        CHECK(std::abs(it.trace.objective_per_update.back() - 1.0 / total) < 1e-10);
    }
}

TEST_CASE("closed_form_nk") {
    const SystemConfig cfg = make_config(2, 2, 1.0, {1.0, 0.5});
    CHECK(objective(closed_form_nk(cfg), cfg) == doctest::Approx(7.0 / 6.0).epsilon(1e-14));

    const SystemConfig uneven = make_config(5, 5, 0.3, {0.2, 0.4, 0.6, 0.8, 1.0}, {1, 2, 3, 4, 5});
    const CMatrix x = closed_form_nk(uneven).matrix();
    CMatrix expect = CMatrix::Zero(5, 5);
    for (int k = 0; k < 5; ++k) expect(k, k) = uneven.powers[k];
    CHECK((x.adjoint() * x - expect).cwiseAbs().maxCoeff() < 1e-12);
    // Matches the majorization optimum when no weight dominates.
    CHECK(objective(closed_form_nk(uneven), uneven) ==
          doctest::Approx(testing::majorization_optimum(weights(uneven), 5, 0.3)).epsilon(1e-12));
    CHECK_THROWS_AS(closed_form_nk(make_config(2, 1, 1.0, {1, 1})), ContractViolation);
}

TEST_CASE("initial_pilots") {
    const SystemConfig cfg = make_config(6, 4, 1.0, {1, 1, 1, 1, 1, 1}, {1, 2, 3, 1, 2, 3});
    for (InitScheme s : {InitScheme::DftReuse, InitScheme::DftTruncated, InitScheme::Random}) {
        const PilotMatrix x = initial_pilots(cfg, s, 5);
        for (int k = 0; k < 6; ++k) CHECK(x.energy(k) == doctest::Approx(cfg.powers[k]).epsilon(1e-14));
    }
    const CMatrix reuse = initial_pilots(cfg, InitScheme::DftReuse).matrix();
    CHECK(alignment(reuse.col(4), reuse.col(0)) == doctest::Approx(1.0));
    const CMatrix trunc = initial_pilots(cfg, InitScheme::DftTruncated).matrix();
    const Complex ratio = trunc(1, 1) / trunc(0, 1);
    CHECK(std::abs(ratio - std::polar(1.0, -2.0 * std::numbers::pi / 6.0)) < 1e-12);
    CHECK(initial_pilots(cfg, InitScheme::Random, 9).matrix() == initial_pilots(cfg, InitScheme::Random, 9).matrix());
    CHECK(initial_pilots(cfg, InitScheme::Random, 9).matrix() != initial_pilots(cfg, InitScheme::Random, 10).matrix());

    CHECK(parse_init("dft-reuse") == InitScheme::DftReuse);
    CHECK(parse_init("dft-k") == InitScheme::DftTruncated);
    CHECK(parse_init("random") == InitScheme::Random);
    CHECK_THROWS_AS(parse_init("svd"), ConfigError);
}

TEST_CASE("combiner_u") {
    const SystemConfig one = make_config(1, 1, 1.0, {1.0});
    CHECK(std::abs(combiner_u(single(1.0), 0, one)(0) - 0.5) < 1e-15);

    const SystemConfig cfg = make_config(3, 3, 0.6, {0.3, 0.6, 0.9}, {1.5, 1.0, 0.5});
    const PilotMatrix x = closed_form_nk(cfg);
    for (int k = 0; k < 3; ++k) {
        const CVector expect = cfg.gains[k] * x.column(k) / (cfg.gains[k] * cfg.powers[k] + cfg.sigma2);
        CHECK((combiner_u(x, k, cfg) - expect).norm() < 1e-13);
    }
}

TEST_CASE("combiner_u maximizes the per-user Rayleigh quotient") {
    std::mt19937_64 rng(18);
    for (int t = 0; t < 10; ++t) {
        const SystemConfig cfg = random_config(rng);
        const PilotMatrix x = random_pilots(rng, cfg);
        const int k = testing::uniform_int(rng, 0, cfg.K - 1);
        const CVector u = combiner_u(x, k, cfg);
        const double best = combiner_ratio(x, u, k, cfg);
        for (int d = 0; d < 100; ++d) {
            CVector dir = testing::random_complex(rng, cfg.N, 1);
            dir *= u.norm() / dir.norm();
            CHECK(combiner_ratio(x, u + 1e-3 * dir, k, cfg) <= best * (1.0 + 1e-14));
        }
    }
}

TEST_CASE("receiver_scalar") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 30; ++t) {
        const SystemConfig cfg = random_config(rng);
        const PilotMatrix x = random_pilots(rng, cfg);
        const int k = testing::uniform_int(rng, 0, cfg.K - 1);
        const CVector u = combiner_u(x, k, cfg);
        CHECK(std::abs(receiver_scalar(x, u, k, cfg) - 1.0) < 1e-12);

        // The applied receiver conj(c) u does not depend on how u is scaled.
        const Complex alpha = testing::random_complex(rng, 1, 1)(0);
        const CVector v = testing::random_complex(rng, cfg.N, 1);
        const CVector applied = std::conj(receiver_scalar(x, v, k, cfg)) * v;
        const CVector scaled = std::conj(receiver_scalar(x, alpha * v, k, cfg)) * (alpha * v);
        CHECK((applied - scaled).norm() < 1e-12 * applied.norm());
    }
    const SystemConfig unit = make_config(2, 2, 1.0, {1, 1});
    const PilotMatrix x = closed_form_nk(unit);
    CHECK(std::abs(receiver_scalar(x, x.column(0), 0, unit) - 0.5) < 1e-14);
    CHECK_THROWS_AS(receiver_scalar(x, CVector::Zero(2), 0, unit), ContractViolation);
}

TEST_CASE("proposed_estimate") {
    std::mt19937_64 rng(20);
    SUBCASE("near-noiseless orthogonal pilots recover H") {
        const SystemConfig cfg = make_config(4, 4, 1e-9, {0.3, 0.5, 0.7, 0.9});
        const PilotMatrix x = closed_form_nk(cfg);
        const ChannelMatrix h{testing::random_complex(rng, 4, 4)};
        const auto est = proposed_estimate(received_pilot_signal(h, x, CMatrix::Zero(4, 4)), x, cfg);
        CHECK((est.h - h.h).norm() < 1e-6);
    }
    SUBCASE("scalar shrinkage") {
        const SystemConfig cfg = make_config(1, 1, 1.0, {1.0});
        const ChannelMatrix h{testing::random_complex(rng, 4, 1)};
        const auto est = proposed_estimate(received_pilot_signal(h, single(1.0), CMatrix::Zero(4, 1)), single(1.0), cfg);
        CHECK((est.h - 0.5 * h.h).norm() < 1e-14);
    }
    SUBCASE("equals g_k Y A^{-1} x_k") {
        const SystemConfig cfg = random_config(rng);
        const PilotMatrix x = random_pilots(rng, cfg);
        const ReceivedSignal y{testing::random_complex(rng, cfg.M, cfg.N)};
        const CMatrix a_inv = testing::lu_inverse(gram_matrix(x, cfg));
        const auto est = proposed_estimate(y, x, cfg);
        for (int k = 0; k < cfg.K; ++k) {
            const CVector expect = cfg.gains[k] * y.y * a_inv * x.column(k);
            CHECK((est.h.col(k) - expect).norm() < 1e-10 * (1.0 + expect.norm()));
        }
    }
}

TEST_CASE("analytic_wsmse: closed cases") {
    CHECK(analytic_wsmse(single(1.0), make_config(1, 1, 1.0, {1.0})).normalized ==
          doctest::Approx(0.5).epsilon(1e-15));
    const SystemConfig two = make_config(2, 1, 1.0, {1.0, 1.0});
    CHECK(analytic_wsmse(closed_form_n1(two), two).normalized == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    const SystemConfig noisy = make_config(1, 1, 1e6, {1.0});
    CHECK(analytic_wsmse(single(1.0), noisy).normalized == doctest::Approx(1.0 - 1.0 / (1.0 + 1e6)).epsilon(1e-14));
}

TEST_CASE("analytic_wsmse: identity, bounds and invariances (property)") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 100; ++t) {
        const SystemConfig cfg = random_config(rng);
        const PilotMatrix x = random_pilots(rng, cfg);
        const WsmseReport r = analytic_wsmse(x, cfg);
        CHECK(std::abs(r.normalized - wsmse_from_objective(objective(x, cfg), cfg)) < 1e-12);
        CHECK(r.normalized >= 0.0);
        CHECK(r.normalized <= 1.0);
        for (double v : r.per_user) {
            CHECK(v >= -1e-12);
            CHECK(v <= 1.0 + 1e-12);
        }

        // Per-user phase rotation.
        const int k = testing::uniform_int(rng, 0, cfg.K - 1);
        PilotMatrix rotated = x;
        rotated.set_column(k, std::polar(1.0, testing::uniform(rng, 0, 6.28)) * x.column(k));
        CHECK(std::abs(analytic_wsmse(rotated, cfg).normalized - r.normalized) < 1e-12);
        CHECK(std::abs(objective(rotated, cfg) - objective(x, cfg)) < 1e-12 * objective(x, cfg));

        // Common unitary rotation of the pilot space.
        const CMatrix unitary = testing::random_complex(rng, cfg.N, cfg.N).householderQr().householderQ();
        CHECK(std::abs(objective(PilotMatrix(unitary * x.matrix()), cfg) - objective(x, cfg)) <
              1e-10 * objective(x, cfg));

        // More received energy from any one user never hurts.
        SystemConfig stronger = cfg;
        stronger.gains[k] *= 1.01;
        CHECK(analytic_wsmse(x, stronger).normalized <= r.normalized + 1e-12);
        PilotMatrix louder = x;
        louder.set_column(k, 1.01 * x.column(k));
        CHECK(analytic_wsmse(louder, cfg).normalized <= r.normalized + 1e-12);
    }
}

TEST_CASE("optimized pilots never do worse than the reuse baseline") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        SystemConfig cfg = random_config(rng);
        cfg.powers.assign(cfg.K, cfg.powers[0]);
        const auto base = design_reuse_pilots(cfg.N, cfg.K, cfg.powers);
        const double conv = conventional_analytic_wsmse(cfg, base.reuse).normalized;
        const OptimizeResult r = optimize_pilots(cfg, base.pilots);
        CHECK(analytic_wsmse(r.pilots, cfg).normalized <= conv + 1e-12);
    }
}
