// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pilotopt/model.hpp"
#include "pilotopt/pilot.hpp"

#include <vector>

namespace pilotopt {

/// Users that share a pilot column with each user under cyclic DFT reuse.
struct ReuseMap {
    std::vector<std::vector<int>> clash_sets; // clash_sets[k]: other users on k's pilot, ascending

    const std::vector<int>& clashes(int k) const { return clash_sets.at(k); }
};

// Which scalar the baseline receiver applies to the decoupled statistic.
enum class BaselineReceiver {
    Standard,           // g/(P g + sigma2), derived as if there were no reuse
    ContaminationAware, // g/(P (g + sum of clashing g) + sigma2); not the textbook baseline
};

// Unitary N-point DFT, entry (n, j) = exp(-2 pi i n j / N) / sqrt(N).
CMatrix unitary_dft(int n);

struct ReusePilots {
    PilotMatrix pilots;
    ReuseMap reuse;
};

/// Baseline pilots: column k is sqrt(P) times DFT column (k mod N).
/// Throws ConfigError unless every user has the same power budget.
ReusePilots design_reuse_pilots(int N, int K, const std::vector<double>& powers);

ReuseMap reuse_map_for(int N, int K);
// Users clash when their pilot columns are collinear.
ReuseMap reuse_map_from_pilots(const PilotMatrix& x);

double baseline_scalar(const SystemConfig& cfg, const ReuseMap& reuse, int k,
                       BaselineReceiver receiver = BaselineReceiver::Standard);

/// N x K matrix E with H_hat = Y E; column k is c_k x_k.
CMatrix conventional_estimator_matrix(const PilotMatrix& x, const SystemConfig& cfg, const ReuseMap& reuse,
                                      BaselineReceiver receiver = BaselineReceiver::Standard);

/// h_hat_k = c_k Y x_k (decorrelate with the user's own pilot, then scale).
/// Pilot energies must be uniform; clashes are read off the pilots.
ChannelMatrix conventional_estimate(const ReceivedSignal& y, const PilotMatrix& x, const SystemConfig& cfg,
                                    BaselineReceiver receiver = BaselineReceiver::Standard);

/// Closed-form weighted MSE of the baseline, pilot contamination included.
///
/// Per coefficient, m_k = |c_k P - 1|^2 g_k + |c_k|^2 (P^2 sum_{i in clash(k)} g_i + sigma2 P),
/// and per_user[k] = m_k / g_k.
WsmseReport conventional_analytic_wsmse(const SystemConfig& cfg, const ReuseMap& reuse,
                                        BaselineReceiver receiver = BaselineReceiver::Standard);

} // namespace pilotopt
