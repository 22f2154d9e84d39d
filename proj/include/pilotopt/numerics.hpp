// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>

namespace pilotopt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kSingularRatio = 1e-12;

bool all_finite(const CMatrix& m);
void require_finite(const CMatrix& m, const char* what);

// Largest |h(i,j) - conj(h(j,i))|.
double hermitian_defect(const CMatrix& h);

struct HermitianEig {
    RVector values;  // ascending
    CMatrix vectors; // column j pairs with values(j)
};

/// Eigen-decomposition of a Hermitian matrix.
///
/// Every eigenvector is unit norm and phase-normalized so that its
/// largest-magnitude component is real and positive, which makes the output
/// reproducible bit for bit. Throws ContractViolation when the input is not
/// Hermitian within kHermitianTol and NumericalError when the solver fails.
HermitianEig hermitian_eig(const CMatrix& h);

// Rotates v so its largest-magnitude entry is real positive.
void normalize_phase(Eigen::Ref<CVector> v);

/// h^{-1/2} for Hermitian positive definite h. Throws SingularMatrixError when
/// the smallest eigenvalue is not above kSingularRatio times the largest.
CMatrix inv_sqrt_psd(const CMatrix& h);

/// a^{-1} b for Hermitian positive definite a, via a Cholesky factorization.
CMatrix solve_hermitian(const CMatrix& a, const CMatrix& b);

// tr(a^{-1}) as the sum of reciprocal eigenvalues.
double trace_inverse(const CMatrix& a);

/// Reproducible source of standard normal draws.
///
/// A stream is identified by (seed, stream_id); two streams with the same
/// identity produce the same sequence. Streams are cheap to create and must
/// not be shared between threads.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    double normal();
    // (a + ib)/sqrt(2), a and b independent standard normals.
    Complex complex_normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// rows x cols matrix of i.i.d. CN(0,1), filled column by column.
CMatrix draw_cn(RandomStream& stream, Eigen::Index rows, Eigen::Index cols);

} // namespace pilotopt
