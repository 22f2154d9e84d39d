// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pilotopt/conventional.hpp"
#include "pilotopt/model.hpp"
#include "pilotopt/optimizer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pilotopt {

enum class Estimator { Proposed, Conventional };
enum class Mode { Proposed, Conventional, Both };

Mode parse_mode(const std::string& name);
std::string to_string(Estimator e);

// Trial t draws its channel from stream t and its noise from stream t + 2^32.
inline constexpr std::uint64_t kNoiseStreamOffset = std::uint64_t{1} << 32;

struct MonteCarloOptions {
    std::size_t trials = 5000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    BaselineReceiver receiver = BaselineReceiver::Standard;
};

/// Empirical normalized WSMSE of one estimator at fixed pilots.
///
/// Each trial draws H and the noise, forms Y = H X^H + N, estimates H and
/// scores (1/(K M)) sum_k ||h_hat_k - h_k||^2 / g_k. The result depends only on
/// (cfg, x, estimator, trials, seed): trials are summed in index order after
/// all workers finish.
WsmseReport run_monte_carlo(const SystemConfig& cfg, const PilotMatrix& x, Estimator estimator,
                            const MonteCarloOptions& opts);

struct ExperimentConfig {
    SystemConfig base; // sigma2 and N are overridden per sweep point
    std::vector<double> snr_db_list;
    std::vector<int> n_list;
    std::size_t trials = 5000;
    std::uint64_t seed = 1;
    Mode mode = Mode::Both;
    InitScheme init = InitScheme::DftReuse;
    double tol = kDefaultTol;
    int max_sweeps = kDefaultMaxSweeps;
    unsigned workers = 1;
    bool empirical = true; // false: analytic columns only
    BaselineReceiver receiver = BaselineReceiver::Standard;

    void validate() const;

    static ExperimentConfig desk_profile();  // M=32, K=8, N=4, 5000 trials
    static ExperimentConfig paper_profile(); // M=128, K=32, N=16, 20000 trials, reference gains
};

std::vector<double> default_snr_grid(); // -10, -8, ..., 20 dB

struct SweepRow {
    double snr_db = 0.0;
    int n = 0;
    std::string algorithm;
    double wsmse_analytic = 0.0;
    std::optional<double> wsmse_empirical;
    std::optional<double> std_error;
    std::size_t trials = 0;
    std::optional<int> sweeps;

    // |empirical - analytic| <= 4 standard errors; true when there is no empirical value.
    bool self_consistent(double sigmas = 4.0) const;
};

// One point of a sweep: both estimators (per mode) at the given N and SNR.
std::vector<SweepRow> evaluate_point(const ExperimentConfig& exp, int n, double snr_db);

std::vector<SweepRow> sweep_snr(const ExperimentConfig& exp);
std::vector<SweepRow> sweep_pilot_length(const ExperimentConfig& exp);

struct ConvergenceSeries {
    double snr_db = 0.0;
    InitScheme init = InitScheme::DftReuse;
    OptimizerTrace trace;
};

/// Optimizer traces from the three initializations at every SNR in the list.
std::vector<ConvergenceSeries> convergence_trace(const ExperimentConfig& exp);

} // namespace pilotopt
