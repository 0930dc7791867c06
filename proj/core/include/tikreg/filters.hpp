#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tikreg/linalg.hpp"

namespace tikreg {

/// Regularized problem in SVD coordinates: singular values, b~ = U^T b,
/// right singular vectors and numerical rank.
struct SpectralProblem {
  Vector sigma;    // length n, nonincreasing
  Vector b_tilde;  // length m >= n
  Matrix V;        // n x n
  std::size_t rank = 0;

  Eigen::Index n() const noexcept { return sigma.size(); }
  Eigen::Index m() const noexcept { return b_tilde.size(); }
};

SpectralProblem to_spectral(const SvdFactorization& f, const Vector& b,
                            double rank_tol = kDefaultRankTolerance);

enum class MethodKind {
  Tsvd,              // truncation index k
  TikhonovIdentity,  // L = mu I
  FrMod,             // d_j^2 = max(mu^2 - sigma_j^2, 0)
  ShiftK,            // shift trailing eigenvalues of A^T A by mu^2
  CutK,              // annihilate trailing eigenvalues (TSVD-equivalent)
  Scaled,            // rescale the whole spectrum toward sigma_1
  ScaledK,           // rescale the trailing block only
  Theta,             // affine blend of ShiftK (theta = 0) and ScaledK (theta = 1)
};

/// A concrete method with its parameters bound.
struct RegMethod {
  MethodKind kind = MethodKind::TikhonovIdentity;
  double mu = 0.0;
  std::size_t k = 0;      // Tsvd, or CutK when cut_by_index
  double theta = 0.0;     // Theta only
  bool cut_by_index = false;

  static RegMethod tsvd(std::size_t k);
  static RegMethod tikhonov(double mu);
  static RegMethod frmod(double mu);
  static RegMethod shift_k(double mu);
  static RegMethod cut_k(double mu);
  static RegMethod cut_k_index(std::size_t k);
  static RegMethod scaled(double mu);
  static RegMethod scaled_k(double mu);
  static RegMethod theta_blend(double mu, double theta);
};

/// A method without its regularization parameter, as listed in experiment
/// configurations. Text form: tsvd, tikhonov, frmod, shiftk, cutk, scaled,
/// scaledk, theta:<value>.
struct MethodFamily {
  MethodKind kind = MethodKind::TikhonovIdentity;
  double theta = 0.0;

  /// True for every family whose parameter is mu (everything but TSVD).
  bool uses_mu() const noexcept { return kind != MethodKind::Tsvd; }
  RegMethod with_mu(double mu) const;
  std::string name() const;

  friend bool operator==(const MethodFamily&, const MethodFamily&) = default;
};

MethodFamily parse_method_family(std::string_view text);
std::vector<MethodFamily> parse_method_list(std::string_view comma_separated);

/// Additive modification d_j^2 of the eigenvalues sigma_j^2 of A^T A, i.e.
/// L = D V^T with D^2 = diag(dsq). Entries are negative only for the
/// truncating methods, where dsq_j = -sigma_j^2.
struct DiagonalModification {
  Vector dsq;
  std::size_t k_effective = 0;
};

DiagonalModification build_modification(const RegMethod& method, const Vector& sigma);

/// Largest k in [0, n-1] such that
/// sigma_k^2 (sigma_1^2 + theta mu^2) >= sigma_1^2 (sigma_{k+1}^2 + mu^2),
/// which keeps the modified diagonal nonincreasing. theta = 0 reduces to
/// sigma_k^2 >= sigma_{k+1}^2 + mu^2.
std::size_t monotone_split_index(const Vector& sigma, double mu, double theta);

/// Number of singular values strictly greater than mu, i.e. the k with
/// sigma_{k+1} <= mu < sigma_k.
std::size_t cut_index(const Vector& sigma, double mu);

/// Theta-family modification with an explicitly given split index k.
Vector blended_tail_dsq(const Vector& sigma, double mu, double theta, std::size_t k);
/// ShiftK-style modification (mu^2 on the tail) with an explicit k.
Vector shifted_tail_dsq(const Vector& sigma, double mu, std::size_t k);

struct SolveOptions {
  /// Throw UnregularizedNullComponent instead of zeroing a component that
  /// has a zero denominator and nonzero data.
  bool strict = false;
};

struct SpectralSolution {
  Vector x;
  Vector x_tilde;
  std::size_t k_effective = 0;
  std::size_t zeroed_null_components = 0;
};

/// Regularized coefficients x~ in the right-singular basis, without the
/// final multiplication by V. `zeroed` (optional) receives the number of
/// null components that were set to zero in lenient mode.
Vector spectral_coefficients(const SpectralProblem& sp, const RegMethod& method,
                             SolveOptions options = {}, std::size_t* zeroed = nullptr,
                             std::size_t* k_effective = nullptr);

SpectralSolution solve_spectral_detailed(const SpectralProblem& sp, const RegMethod& method,
                                         SolveOptions options = {});

/// x = V x~ with x~_j = sigma_j b~_j / (sigma_j^2 + d_j^2), zero where the
/// denominator vanishes or j exceeds the numerical rank.
Vector solve_spectral(const SpectralProblem& sp, const RegMethod& method,
                      SolveOptions options = {});

/// Filter factors phi_j, j < rank, from the closed-form expressions of each
/// method; x~_j = phi_j b~_j / sigma_j.
Vector filter_factors(const Vector& sigma, std::size_t rank, const RegMethod& method);
Vector filter_factors(const SpectralProblem& sp, const RegMethod& method);

/// CSV with columns j, sigma, then one phi column per method.
void write_filter_factor_csv(std::ostream& out, const Vector& sigma, std::size_t rank,
                             const std::vector<RegMethod>& methods,
                             const std::vector<std::string>& column_names);

void validate(const RegMethod& method, Eigen::Index n);

}  // namespace tikreg
