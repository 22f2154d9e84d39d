// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pilotopt/numerics.hpp"
#include "pilotopt/pilot.hpp"

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace pilotopt {

/// Dimensions and statistics of one uplink training setup.
///
/// `powers` is each user's total pilot energy over all N symbols, so the
/// budget binds ||x_k||^2, not the per-symbol power. Gains are the average
/// channel power g_k of each user, identical across the M antennas.
struct SystemConfig {
    int M = 1;
    int K = 1;
    int N = 1;
    double sigma2 = 1.0;
    std::vector<double> powers;
    std::vector<double> gains;

    void validate() const;
    bool uniform_power(double rel_tol = 1e-12) const;
};

/// M x K channel; column k is h_k.
struct ChannelMatrix {
    CMatrix h;
};

/// M x N block received over the training period.
struct ReceivedSignal {
    CMatrix y;
};

/// Weighted-sum MSE normalized by K*M.
///
/// per_user[k] is user k's channel MSE divided by g_k*M, so the normalized
/// value is the mean of per_user and lies in [0, 1]. Empirical reports also
/// carry the standard error of the mean over trials.
struct WsmseReport {
    std::vector<double> per_user;
    double normalized = 0.0;
    double std_error = std::numeric_limits<double>::quiet_NaN();
    std::size_t trials = 0;
};

// The 8x4 gain table used in the reference experiments, vectorized column-major.
std::vector<double> paper_gains();

ChannelMatrix generate_channel(const SystemConfig& cfg, RandomStream& stream);
// M x N noise with i.i.d. CN(0, sigma2) entries.
CMatrix generate_noise(const SystemConfig& cfg, RandomStream& stream);

// y = h x^H + noise
ReceivedSignal received_pilot_signal(const ChannelMatrix& h, const PilotMatrix& x, const CMatrix& noise);

// sigma^2 = P_av / 10^(snr/10), P_av the mean of powers.
double sigma2_from_snr(double snr_db, const std::vector<double>& powers);

// Plain text, one value per line, '#' starts a comment.
std::vector<double> read_gains(std::istream& is);
std::vector<double> load_gains(const std::string& path);
void write_gains(std::ostream& os, const std::vector<double>& gains);

} // namespace pilotopt
