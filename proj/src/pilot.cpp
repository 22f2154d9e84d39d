// SPDX-License-Identifier: Apache-2.0
#include "pilotopt/pilot.hpp"

#include "pilotopt/errors.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

namespace pilotopt {

PilotMatrix::PilotMatrix(CMatrix x) : x_(std::move(x)) {
    if (x_.rows() < 1 || x_.cols() < 1) throw ContractViolation("PilotMatrix: empty matrix");
    require_finite(x_, "PilotMatrix");
}

void PilotMatrix::set_column(Eigen::Index k, const CVector& v) {
    if (k < 0 || k >= users() || v.size() != length()) {
        throw ContractViolation("PilotMatrix::set_column: index or length out of range");
    }
    x_.col(k) = v;
}

void PilotMatrix::check_budgets(std::span<const double> powers, double slack) const {
    if (static_cast<Eigen::Index>(powers.size()) != users()) {
        throw ContractViolation("PilotMatrix: power list does not match user count");
    }
    for (Eigen::Index k = 0; k < users(); ++k) {
        if (energy(k) > powers[k] + slack) {
            throw ConfigError("pilot of user " + std::to_string(k + 1) + " has energy " +
                              std::to_string(energy(k)) + " above its budget " + std::to_string(powers[k]));
        }
    }
}

void write_pilots(std::ostream& os, const PilotMatrix& x) {
    const auto& m = x.matrix();
    os << m.rows() << ' ' << m.cols() << '\n';
    os << std::setprecision(17);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) os << m(i, j).real() << ' ' << m(i, j).imag() << '\n';
    }
}

PilotMatrix read_pilots(std::istream& is) {
    long rows = 0;
    long cols = 0;
    if (!(is >> rows >> cols) || rows < 1 || cols < 1) throw ConfigError("pilot file: bad \"N K\" header");
    CMatrix m(rows, cols);
    for (long j = 0; j < cols; ++j) {
        for (long i = 0; i < rows; ++i) {
            double re = 0.0;
            double im = 0.0;
            if (!(is >> re >> im)) throw ConfigError("pilot file: truncated after header");
            m(i, j) = Complex(re, im);
        }
    }
    return PilotMatrix(std::move(m));
}

void save_pilots(const std::string& path, const PilotMatrix& x) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_pilots(os, x);
    if (!os) throw std::runtime_error("write failed: " + path);
}

PilotMatrix load_pilots(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open pilot file " + path);
    return read_pilots(is);
}

} // namespace pilotopt
