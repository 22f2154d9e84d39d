// SPDX-License-Identifier: Apache-2.0
#include "pilotopt/numerics.hpp"

#include "pilotopt/errors.hpp"

#include <cmath>
#include <string>

namespace pilotopt {

namespace {

void require_square(const CMatrix& h, const char* what) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw ContractViolation(std::string(what) + ": expected a non-empty square matrix, got " +
                                std::to_string(h.rows()) + "x" + std::to_string(h.cols()));
    }
}

void require_hermitian(const CMatrix& h, const char* what) {
    require_square(h, what);
    require_finite(h, what);
    const double defect = hermitian_defect(h);
    if (defect > kHermitianTol) {
        throw ContractViolation(std::string(what) + ": matrix is not Hermitian (defect " +
                                std::to_string(defect) + ")");
    }
}

// Eigenvalues only; input already validated.
RVector spectrum(const CMatrix& h, const char* what) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError(std::string(what) + ": eigenvalue iteration did not converge",
                             static_cast<std::size_t>(Eigen::SelfAdjointEigenSolver<CMatrix>::m_maxIterations *
                                                      h.rows()));
    }
    return solver.eigenvalues();
}

void require_positive_definite(const RVector& values, const char* what) {
    const double lo = values.minCoeff();
    const double hi = values.maxCoeff();
    if (!(hi > 0.0) || !(lo > kSingularRatio * hi)) {
        throw SingularMatrixError(std::string(what) + ": matrix is not numerically positive definite", lo);
    }
}

} // namespace

bool all_finite(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
        }
    }
    return true;
}

void require_finite(const CMatrix& m, const char* what) {
    if (!all_finite(m)) throw NumericalError(std::string(what) + ": non-finite matrix entry");
}

double hermitian_defect(const CMatrix& h) {
    if (h.rows() != h.cols()) return INFINITY;
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

void normalize_phase(Eigen::Ref<CVector> v) {
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > best) {
            best = mag;
            pivot = i;
        }
    }
    if (best <= 0.0) return;
    const Complex rotation = std::conj(v(pivot)) / best;
    v *= rotation;
    v(pivot) = Complex(std::abs(v(pivot)), 0.0);
}

HermitianEig hermitian_eig(const CMatrix& h) {
    require_hermitian(h, "hermitian_eig");
    // Symmetrize so rounding-level skew does not leak into the solver.
    const CMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eig: eigenvalue iteration did not converge",
                             static_cast<std::size_t>(Eigen::SelfAdjointEigenSolver<CMatrix>::m_maxIterations *
                                                      h.rows()));
    }
    HermitianEig out{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
        out.vectors.col(j).normalize();
        normalize_phase(out.vectors.col(j));
    }
    return out;
}

CMatrix inv_sqrt_psd(const CMatrix& h) {
    const HermitianEig eig = hermitian_eig(h);
    require_positive_definite(eig.values, "inv_sqrt_psd");
    const RVector scale = eig.values.cwiseSqrt().cwiseInverse();
    CMatrix out = eig.vectors * scale.asDiagonal() * eig.vectors.adjoint();
    return 0.5 * (out + out.adjoint());
}

CMatrix solve_hermitian(const CMatrix& a, const CMatrix& b) {
    require_hermitian(a, "solve_hermitian");
    if (b.rows() != a.rows()) {
        throw ContractViolation("solve_hermitian: right-hand side has " + std::to_string(b.rows()) +
                                " rows, expected " + std::to_string(a.rows()));
    }
    const CMatrix sym = 0.5 * (a + a.adjoint());
    require_positive_definite(spectrum(sym, "solve_hermitian"), "solve_hermitian");
    Eigen::LLT<CMatrix> llt(sym);
    if (llt.info() != Eigen::Success) {
        throw SingularMatrixError("solve_hermitian: Cholesky factorization failed", spectrum(sym, "solve_hermitian").minCoeff());
    }
    return llt.solve(b);
}

double trace_inverse(const CMatrix& a) {
    require_hermitian(a, "trace_inverse");
    const RVector values = spectrum(0.5 * (a + a.adjoint()), "trace_inverse");
    require_positive_definite(values, "trace_inverse");
    return values.cwiseInverse().sum();
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                      0x9e3779b9u};
    engine_.seed(seq);
}

double RandomStream::normal() { return normal_(engine_); }

Complex RandomStream::complex_normal() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return Complex(re, im) * M_SQRT1_2;
}

CMatrix draw_cn(RandomStream& stream, Eigen::Index rows, Eigen::Index cols) {
    CMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = stream.complex_normal();
    }
    return out;
}

} // namespace pilotopt
