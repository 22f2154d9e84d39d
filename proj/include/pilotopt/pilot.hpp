// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pilotopt/numerics.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace pilotopt {

/// N x K pilot matrix; column k is the training sequence sent by user k.
class PilotMatrix {
public:
    PilotMatrix() = default;
    explicit PilotMatrix(CMatrix x);

    Eigen::Index length() const noexcept { return x_.rows(); } // N
    Eigen::Index users() const noexcept { return x_.cols(); }  // K

    const CMatrix& matrix() const noexcept { return x_; }
    auto column(Eigen::Index k) const { return x_.col(k); }
    double energy(Eigen::Index k) const { return x_.col(k).squaredNorm(); }

    void set_column(Eigen::Index k, const CVector& v);

    // Throws ConfigError when some column exceeds its budget by more than slack.
    void check_budgets(std::span<const double> powers, double slack = 1e-9) const;

private:
    CMatrix x_;
};

// "N K" header then N*K lines "re im", column-major, 17 significant digits.
void write_pilots(std::ostream& os, const PilotMatrix& x);
PilotMatrix read_pilots(std::istream& is);

void save_pilots(const std::string& path, const PilotMatrix& x);
PilotMatrix load_pilots(const std::string& path);

} // namespace pilotopt
