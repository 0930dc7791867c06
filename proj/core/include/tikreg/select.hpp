#pragma once

#include <cstddef>
#include <vector>

#include "tikreg/filters.hpp"

namespace tikreg {

/// Discrepancy principle target: residual norm eta * epsilon, where epsilon
/// bounds ||e||. eta defaults to 1.
struct DiscrepancySpec {
  double epsilon = 0.0;
  double eta = 1.0;

  double target() const noexcept { return eta * epsilon; }
};

void validate(const DiscrepancySpec& spec);

/// Residual norm ||Sigma x~_mu - b~|| of standard Tikhonov regularization,
/// including the part of b~ outside the range of A (the residual floor).
double tikhonov_residual(const SpectralProblem& sp, double mu);

/// Norm of the components of b~ that no choice of mu can fit.
double residual_floor(const SpectralProblem& sp);

/// Solves tikhonov_residual(mu) = eta * epsilon by safeguarded Newton on
/// nu = mu^2 (bisection in log nu when a step leaves the bracket).
/// Relative accuracy 1e-10 on the residual; throws NoiseDominatesData when
/// eta * epsilon >= ||b~||, DiscrepancyUnattainable when it is at or below
/// the residual floor, IterationLimit after 100 iterations.
double discrepancy_mu(const SpectralProblem& sp, const DiscrepancySpec& spec);

/// Smallest TSVD truncation index k <= rank with
/// sum_{j > k} b~_j^2 <= (eta * epsilon)^2.
std::size_t discrepancy_k(const SpectralProblem& sp, const DiscrepancySpec& spec);

struct BoundMethod {
  MethodFamily family;
  RegMethod method;
  std::size_t k_effective = 0;
};

/// One mu for every mu-based method, chosen so that standard Tikhonov meets
/// the discrepancy principle; TSVD (when requested) gets its own k.
struct SharedMuBundle {
  double mu = 0.0;
  std::vector<BoundMethod> methods;
};

SharedMuBundle shared_mu_pipeline(const SpectralProblem& sp, const DiscrepancySpec& spec,
                                  const std::vector<MethodFamily>& families);

struct OptimalParameter {
  MethodFamily family;
  double mu = 0.0;        // mu-based families
  std::size_t k = 0;      // TSVD, or k_effective of the best mu
  double error = 0.0;     // best relative error found
  double grid_error = 0.0;  // best relative error on the coarse log grid
};

/// Oracle parameter choice minimizing ||x - x_true|| / ||x_true||. TSVD scans
/// every k in [0, rank]; mu-based families scan 50 log-spaced values in
/// [sigma_rank * 1e-3, sigma_1 * 1e3], then refine the best bracket by
/// golden-section search on log mu to relative width 1e-6.
OptimalParameter optimal_params(const SpectralProblem& sp, const Vector& x_true,
                                const MethodFamily& family);

/// Same search with x_true already expressed as V^T x_true.
OptimalParameter optimal_params_spectral(const SpectralProblem& sp, const Vector& x_true_tilde,
                                         const MethodFamily& family);

}  // namespace tikreg
