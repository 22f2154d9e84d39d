// SPDX-License-Identifier: Apache-2.0
#include "pilotopt/model.hpp"

#include "pilotopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace pilotopt {

void SystemConfig::validate() const {
    if (M < 1 || K < 1 || N < 1) throw ConfigError("M, K and N must all be at least 1");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw ConfigError("noise variance must be finite and >= 0");
    if (static_cast<int>(powers.size()) != K) {
        throw ConfigError("expected " + std::to_string(K) + " powers, got " + std::to_string(powers.size()));
    }
    if (static_cast<int>(gains.size()) != K) {
        throw ConfigError("expected " + std::to_string(K) + " gains, got " + std::to_string(gains.size()));
    }
    for (double p : powers) {
        if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("pilot powers must be finite and > 0");
    }
    for (double g : gains) {
        if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("gains must be finite and > 0");
    }
}

bool SystemConfig::uniform_power(double rel_tol) const {
    if (powers.empty()) return true;
    const auto [lo, hi] = std::minmax_element(powers.begin(), powers.end());
    return *hi - *lo <= rel_tol * *hi;
}

std::vector<double> paper_gains() {
    // Rows of G; returned column by column.
    static constexpr double table[8][4] = {
        {0.0450, 0.7400, 0.8191, 0.2608}, {0.7040, 0.2965, 0.0823, 0.8754},
        {0.0775, 0.7410, 0.1251, 0.4437}, {0.5925, 0.6363, 0.5327, 0.2087},
        {0.6737, 0.2419, 0.7205, 0.4000}, {0.3940, 0.4115, 0.1497, 0.8782},
        {0.0218, 0.9238, 0.6326, 0.0669}, {0.6327, 0.7537, 0.7697, 0.0697},
    };
    std::vector<double> out;
    out.reserve(32);
    for (int c = 0; c < 4; ++c) {
        for (int r = 0; r < 8; ++r) out.push_back(table[r][c]);
    }
    return out;
}

ChannelMatrix generate_channel(const SystemConfig& cfg, RandomStream& stream) {
    CMatrix h = draw_cn(stream, cfg.M, cfg.K);
    for (int k = 0; k < cfg.K; ++k) h.col(k) *= std::sqrt(cfg.gains[k]);
    return {std::move(h)};
}

CMatrix generate_noise(const SystemConfig& cfg, RandomStream& stream) {
    return draw_cn(stream, cfg.M, cfg.N) * std::sqrt(cfg.sigma2);
}

ReceivedSignal received_pilot_signal(const ChannelMatrix& h, const PilotMatrix& x, const CMatrix& noise) {
    const auto& xm = x.matrix();
    if (h.h.cols() != xm.cols() || noise.rows() != h.h.rows() || noise.cols() != xm.rows()) {
        throw ContractViolation("received_pilot_signal: dimension mismatch (H " + std::to_string(h.h.rows()) + "x" +
                                std::to_string(h.h.cols()) + ", X " + std::to_string(xm.rows()) + "x" +
                                std::to_string(xm.cols()) + ", noise " + std::to_string(noise.rows()) + "x" +
                                std::to_string(noise.cols()) + ")");
    }
    return {h.h * xm.adjoint() + noise};
}

double sigma2_from_snr(double snr_db, const std::vector<double>& powers) {
    if (powers.empty()) throw ConfigError("sigma2_from_snr: empty power list");
    const double p_av = std::accumulate(powers.begin(), powers.end(), 0.0) / static_cast<double>(powers.size());
    return p_av / std::pow(10.0, snr_db / 10.0);
}

std::vector<double> read_gains(std::istream& is) {
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        double g = 0.0;
        if (!(fields >> g)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw ConfigError("gains file line " + std::to_string(lineno) + ": not a number");
        }
        std::string rest;
        if (fields >> rest) throw ConfigError("gains file line " + std::to_string(lineno) + ": trailing text");
        out.push_back(g);
    }
    return out;
}

std::vector<double> load_gains(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open gains file " + path);
    return read_gains(is);
}

void write_gains(std::ostream& os, const std::vector<double>& gains) {
    os << std::setprecision(17);
    for (double g : gains) os << g << '\n';
}

} // namespace pilotopt
