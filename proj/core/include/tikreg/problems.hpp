#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "tikreg/linalg.hpp"

namespace tikreg {

enum class ProblemKind { Phillips, Shaw, Deriv2, Heat };

std::string_view to_string(ProblemKind kind) noexcept;
ProblemKind parse_problem_kind(std::string_view name);

/// Discretized first-kind integral equation A x = b with known solution.
/// b_true is computed as A * x_true, so the exact system is consistent.
struct TestProblem {
  ProblemKind kind;
  Matrix A;
  Vector x_true;
  Vector b_true;
};

/// Convolution kernel phi(s - t), phi(t) = 1 + cos(pi t / 3) on |t| < 3,
/// over [-6, 6]. Galerkin discretization with orthonormal box functions,
/// integrals evaluated by Gauss-Legendre rules on kink-free pieces (exact to
/// rounding). Requires n divisible by 4 so the kinks at +-3 fall on the grid.
TestProblem phillips(std::size_t n);

/// Kernel (cos s + cos t)^2 (sin u / u)^2, u = pi (sin s + sin t), on
/// [-pi/2, pi/2]^2, discretized with the midpoint rule; x_true samples
/// 2 exp(-6 (t - 0.8)^2) + exp(-2 (t + 0.5)^2) at the midpoints. n even.
TestProblem shaw(std::size_t n);

/// Green's function of the second derivative on [0, 1] with the hat
/// solution x(t) = t (t < 0.5), 1 - t (t >= 0.5). Exact Galerkin
/// discretization with orthonormal box functions.
TestProblem deriv2(std::size_t n);

/// Inverse heat equation: Volterra kernel k(tau) with kappa = 1, midpoint
/// quadrature, lower-triangular Toeplitz A. x_true is a smooth pulse on the
/// first half of [0, 1] (quadratic rise, bump, exponential decay) and zero
/// on the second half.
TestProblem heat(std::size_t n);

TestProblem make_problem(ProblemKind kind, std::size_t n);

double phillips_phi(double t);
double shaw_kernel(double s, double t);
/// k(tau) = tau^(-3/2) / (2 sqrt(pi)) * exp(-1 / (4 tau)); 0 for tau <= 0.
double heat_kernel(double tau);
/// Right-hand side g(s) of the deriv2 equation for the hat solution.
double deriv2_rhs(double s);

}  // namespace tikreg
