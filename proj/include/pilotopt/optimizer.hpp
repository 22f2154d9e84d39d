// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pilotopt/model.hpp"
#include "pilotopt/pilot.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pilotopt {

inline constexpr double kDefaultTol = 1e-8;
inline constexpr int kDefaultMaxSweeps = 100;
inline constexpr double kDegenerateGap = 1e-10;

struct OptimizerTrace {
    double initial_objective = 0.0;
    std::vector<double> objective_per_update; // tr(A^{-1}) after each single-user update
    int sweeps_completed = 0;
    bool converged = false;
    int degenerate_updates = 0;

    // Updates divided by K, the iteration count used when plotting convergence.
    double normalized_iterations(int K) const {
        return static_cast<double>(objective_per_update.size()) / K;
    }
};

// A = sum_i g_i x_i x_i^H + sigma2 I.
CMatrix gram_matrix(const PilotMatrix& x, const SystemConfig& cfg);

/// tr(A^{-1}), the quantity the pilot design minimizes.
double objective(const PilotMatrix& x, const SystemConfig& cfg);

// Q_k = A - g_k x_k x_k^H.
CMatrix leave_one_out(const PilotMatrix& x, int k, const SystemConfig& cfg);

struct RayleighUpdate {
    CVector column;
    // Top eigenvalue not separated: the incumbent direction is kept, projected
    // onto the optimal eigenspace when it lies outside it.
    bool degenerate = false;
};

/// Best pilot for user k with every other pilot held fixed.
///
/// Maximizes g x^H Q^{-2} x / x^H (g Q^{-1} + I/P) x: whiten by F^{-1/2} with
/// F = g Q^{-1} + I/P, take the principal eigenvector of
/// g F^{-1/2} Q^{-2} F^{-1/2}, map back and rescale to ||x||^2 = P exactly.
RayleighUpdate rayleigh_update(const PilotMatrix& x, int k, const SystemConfig& cfg);

struct OptimizeResult {
    PilotMatrix pilots;
    OptimizerTrace trace;
};

/// Sequential per-user updates k = 1..K, repeated until the objective drops by
/// less than `tol` (relative) over a full sweep or `max_sweeps` is reached.
/// Requires sigma2 > 0 and an initialization within the power budgets.
OptimizeResult optimize_pilots(const SystemConfig& cfg, const PilotMatrix& init, double tol = kDefaultTol,
                               int max_sweeps = kDefaultMaxSweeps);

// N = 1: every user sends sqrt(P_k).
PilotMatrix closed_form_n1(const SystemConfig& cfg);
// N = K: orthogonal DFT columns scaled to sqrt(P_k).
PilotMatrix closed_form_nk(const SystemConfig& cfg);

enum class InitScheme {
    DftReuse,     // first K columns of [U U ...], U the N-point DFT
    DftTruncated, // first N rows of the K-point DFT
    Random,       // complex Gaussian columns
};

InitScheme parse_init(const std::string& name);
std::string to_string(InitScheme scheme);

/// Starting pilots with every column scaled to exactly sqrt(P_k).
PilotMatrix initial_pilots(const SystemConfig& cfg, InitScheme scheme, std::uint64_t seed = 0);

// u_k = g_k A^{-1} x_k
CVector combiner_u(const PilotMatrix& x, int k, const SystemConfig& cfg);

// c_k = g_k (x_k^H u_k) / (u_k^H A u_k); the receiver is W_k = c_k I_M.
Complex receiver_scalar(const PilotMatrix& x, const CVector& u, int k, const SystemConfig& cfg);

/// N x K matrix E with H_hat = Y E; column k is conj(c_k) u_k.
CMatrix proposed_estimator_matrix(const PilotMatrix& x, const SystemConfig& cfg);

/// h_hat_k = W_k^H Y u_k with u_k and W_k at their optimum.
ChannelMatrix proposed_estimate(const ReceivedSignal& y, const PilotMatrix& x, const SystemConfig& cfg);

/// Normalized WSMSE of the proposed estimator: per_user[k] = 1 - g_k x_k^H A^{-1} x_k.
WsmseReport analytic_wsmse(const PilotMatrix& x, const SystemConfig& cfg);

// Same quantity via 1 - N/K + (sigma2/K) tr(A^{-1}).
double wsmse_from_objective(double trace_inv, const SystemConfig& cfg);

} // namespace pilotopt
