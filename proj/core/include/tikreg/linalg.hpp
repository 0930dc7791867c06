#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "tikreg/rng.hpp"

namespace tikreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Singular values below this fraction of sigma_1 count as zero.
inline constexpr double kDefaultRankTolerance = 1e-14;

/// A = U * diag(sigma) * V^T with U (m x m) and V (n x n) orthogonal and
/// sigma nonincreasing. Each column u_j is signed so that its largest
/// magnitude entry is positive; v_j follows u_j.
struct SvdFactorization {
  Matrix U;
  Vector sigma;
  Matrix V;
};

/// Full SVD of a tall or square matrix (rows >= cols >= 1). Throws
/// SvdNoConvergence if the kernel fails or the factors do not reproduce A.
SvdFactorization svd(const Matrix& a);

/// Number of singular values strictly above tol * sigma_1 (0 when sigma_1 is 0).
std::size_t numerical_rank(const Vector& sigma, double tol = kDefaultRankTolerance);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// diagonal of R made positive.
Matrix random_orthogonal(std::size_t n, RngStream& rng);

/// Orthonormal DCT-II matrix, C(j, t) = w_j cos(pi (2t + 1) j / (2n)).
Matrix dct_matrix(std::size_t n);

/// ||Q^T Q - I||_F.
double orthogonality_residual(const Matrix& q);

/// Solves (A^T A + V diag(dsq) V^T) x = A^T b with a dense Cholesky
/// factorization. Used to cross-check the spectral solvers; throws
/// SingularRegularizedSystem when the system matrix is not positive definite.
Vector solve_normal_equations_oracle(const Matrix& a, const Vector& dsq, const Matrix& v,
                                     const Vector& b);

bool all_finite(const Matrix& m);

}  // namespace tikreg
