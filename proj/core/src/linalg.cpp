#include "tikreg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tikreg/error.hpp"

namespace tikreg {

bool all_finite(const Matrix& m) { return m.allFinite(); }

SvdFactorization svd(const Matrix& a) {
  const auto m = a.rows();
  const auto n = a.cols();
  require(n >= 1 && m >= n, "svd expects rows >= cols >= 1, got " + std::to_string(m) + "x" +
                                std::to_string(n));
  require(a.allFinite(), "svd input has non-finite entries");

  Eigen::BDCSVD<Matrix> kernel(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (kernel.info() != Eigen::Success) {
    fail(ErrorCode::SvdNoConvergence, "dense SVD kernel reported failure");
  }

  SvdFactorization f{kernel.matrixU(), kernel.singularValues(), kernel.matrixV()};
  if (!f.U.allFinite() || !f.V.allFinite() || !f.sigma.allFinite()) {
    fail(ErrorCode::SvdNoConvergence, "dense SVD produced non-finite factors");
  }

  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::Index at = 0;
    f.U.col(j).cwiseAbs().maxCoeff(&at);
    if (f.U(at, j) < 0.0) {
      f.U.col(j) *= -1.0;
      if (j < n) f.V.col(j) *= -1.0;
    }
  }

  const double scale = std::max(1.0, a.norm());
  const double residual =
      (f.U.leftCols(n) * f.sigma.asDiagonal() * f.V.transpose() - a).norm();
  if (!(residual <= 1e-8 * scale)) {
    fail(ErrorCode::SvdNoConvergence,
         "dense SVD reconstruction residual " + std::to_string(residual) + " too large");
  }
  return f;
}

std::size_t numerical_rank(const Vector& sigma, double tol) {
  if (sigma.size() == 0 || !(sigma(0) > 0.0)) return 0;
  const double cutoff = tol * sigma(0);
  std::size_t rank = 0;
  for (Eigen::Index j = 0; j < sigma.size(); ++j) {
    if (sigma(j) > cutoff) ++rank;
  }
  return rank;
}

Matrix random_orthogonal(std::size_t n, RngStream& rng) {
  require(n >= 1, "random_orthogonal needs n >= 1");
  const auto size = static_cast<Eigen::Index>(n);
  Matrix g(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < size; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Matrix dct_matrix(std::size_t n) {
  require(n >= 1, "dct_matrix needs n >= 1");
  const auto size = static_cast<Eigen::Index>(n);
  const double pi = std::acos(-1.0);
  const double w0 = std::sqrt(1.0 / static_cast<double>(n));
  const double w = std::sqrt(2.0 / static_cast<double>(n));
  Matrix c(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    const double wj = j == 0 ? w0 : w;
    for (Eigen::Index t = 0; t < size; ++t) {
      c(j, t) = wj * std::cos(pi * static_cast<double>((2 * t + 1) * j) /
                              (2.0 * static_cast<double>(n)));
    }
  }
  return c;
}

double orthogonality_residual(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

Vector solve_normal_equations_oracle(const Matrix& a, const Vector& dsq, const Matrix& v,
                                     const Vector& b) {
  const auto n = a.cols();
  require(dsq.size() == n && v.rows() == n && v.cols() == n && b.size() == a.rows(),
          "solve_normal_equations_oracle: dimension mismatch");

  const Matrix system = a.transpose() * a + v * dsq.asDiagonal() * v.transpose();
  const Vector rhs = a.transpose() * b;

  Eigen::LLT<Matrix> chol(system);
  if (chol.info() != Eigen::Success) {
    fail(ErrorCode::SingularRegularizedSystem, "normal-equations matrix is not positive definite");
  }
  // A PSD-singular matrix may survive the factorization through rounding;
  // reject pivots at the rounding level of the largest diagonal entry.
  const Vector pivots = Matrix(chol.matrixL()).diagonal();
  const double floor = std::numeric_limits<double>::epsilon() * static_cast<double>(n) *
                       system.diagonal().cwiseAbs().maxCoeff();
  if (pivots.cwiseAbs2().minCoeff() <= floor) {
    fail(ErrorCode::SingularRegularizedSystem, "normal-equations matrix is numerically singular");
  }
  return chol.solve(rhs);
}

}  // namespace tikreg
