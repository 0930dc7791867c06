#include "tikreg/problems.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "tikreg/error.hpp"

namespace tikreg {
namespace {

const double kPi = std::acos(-1.0);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] via Newton iteration on P_n.
GaussRule gauss_legendre(int points) {
  GaussRule rule{std::vector<double>(points), std::vector<double>(points)};
  for (int i = 0; i < points; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& rule16() {
  static const GaussRule rule = gauss_legendre(16);
  return rule;
}

template <class F>
double integrate(F&& f, double lo, double hi) {
  const GaussRule& r = rule16();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
  return half * sum;
}

// Splits [lo, hi] at `kink` when it lies strictly inside.
template <class F>
double integrate_split(F&& f, double lo, double hi, double kink) {
  if (kink > lo && kink < hi) return integrate(f, lo, kink) + integrate(f, kink, hi);
  return integrate(f, lo, hi);
}

Eigen::Index as_index(std::size_t n) { return static_cast<Eigen::Index>(n); }

TestProblem finish(ProblemKind kind, Matrix a, Vector x) {
  Vector b = a * x;
  return TestProblem{kind, std::move(a), std::move(x), std::move(b)};
}

}  // namespace

std::string_view to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::Phillips: return "phillips";
    case ProblemKind::Shaw: return "shaw";
    case ProblemKind::Deriv2: return "deriv2";
    case ProblemKind::Heat: return "heat";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(std::string_view name) {
  if (name == "phillips") return ProblemKind::Phillips;
  if (name == "shaw") return ProblemKind::Shaw;
  if (name == "deriv2") return ProblemKind::Deriv2;
  if (name == "heat") return ProblemKind::Heat;
  fail(ErrorCode::InvalidArgument, "unknown problem '" + std::string(name) + "'");
}

double phillips_phi(double t) { return std::abs(t) < 3.0 ? 1.0 + std::cos(kPi * t / 3.0) : 0.0; }

double shaw_kernel(double s, double t) {
  const double c = std::cos(s) + std::cos(t);
  const double u = kPi * (std::sin(s) + std::sin(t));
  const double sinc = std::abs(u) < 1e-300 ? 1.0 : std::sin(u) / u;
  const double value = c * sinc;
  return value * value;
}

double heat_kernel(double tau) {
  if (!(tau > 0.0)) return 0.0;
  return std::pow(tau, -1.5) / (2.0 * std::sqrt(kPi)) * std::exp(-1.0 / (4.0 * tau));
}

double deriv2_rhs(double s) {
  if (s < 0.5) return (4.0 * s * s * s - 3.0 * s) / 24.0;
  return (-4.0 * s * s * s + 12.0 * s * s - 9.0 * s + 1.0) / 24.0;
}

TestProblem phillips(std::size_t n) {
  require(n >= 4 && n % 4 == 0, "phillips needs n divisible by 4, got " + std::to_string(n));
  const auto size = as_index(n);
  const double h = 12.0 / static_cast<double>(n);

  // (1/h) * integral over two boxes of phi(s - t) depends only on the offset
  // d = i - j: (1/h) * int_{-h}^{h} (h - |tau|) phi(d h + tau) dtau.
  Vector row(size);
  for (Eigen::Index d = 0; d < size; ++d) {
    auto integrand = [&](double tau) {
      return (h - std::abs(tau)) * phillips_phi(static_cast<double>(d) * h + tau);
    };
    row(d) = (integrate(integrand, -h, 0.0) + integrate(integrand, 0.0, h)) / h;
  }
  Matrix a(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) a(i, j) = row(std::abs(i - j));
  }

  Vector x(size);
  const double scale = 1.0 / std::sqrt(h);
  for (Eigen::Index j = 0; j < size; ++j) {
    const double lo = -6.0 + static_cast<double>(j) * h;
    x(j) = scale * integrate(phillips_phi, lo, lo + h);
  }
  return finish(ProblemKind::Phillips, std::move(a), std::move(x));
}

TestProblem shaw(std::size_t n) {
  require(n >= 4 && n % 2 == 0, "shaw needs an even n >= 4, got " + std::to_string(n));
  const auto size = as_index(n);
  const double h = kPi / static_cast<double>(n);
  Vector t(size);
  for (Eigen::Index i = 0; i < size; ++i) t(i) = -kPi / 2.0 + (static_cast<double>(i) + 0.5) * h;

  Matrix a(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = i; j < size; ++j) {
      a(i, j) = h * shaw_kernel(t(i), t(j));
      a(j, i) = a(i, j);
    }
  }
  Vector x(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double ti = t(i);
    x(i) = 2.0 * std::exp(-6.0 * (ti - 0.8) * (ti - 0.8)) + std::exp(-2.0 * (ti + 0.5) * (ti + 0.5));
  }
  return finish(ProblemKind::Shaw, std::move(a), std::move(x));
}

TestProblem deriv2(std::size_t n) {
  require(n >= 4, "deriv2 needs n >= 4, got " + std::to_string(n));
  const auto size = as_index(n);
  const double h = 1.0 / static_cast<double>(n);

  // Inner integral over box [lo, hi] in t of the Green's function, exact in s.
  auto inner = [](double s, double lo, double hi) {
    if (s >= hi) return (s - 1.0) * (hi * hi - lo * lo) / 2.0;
    if (s <= lo) return s * ((hi * hi - lo * lo) / 2.0 - (hi - lo));
    return (s - 1.0) * (s * s - lo * lo) / 2.0 + s * ((hi * hi - s * s) / 2.0 - (hi - s));
  };

  Matrix a(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double si = static_cast<double>(i) * h;
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double tj = static_cast<double>(j) * h;
      // The inner integral is a polynomial of degree <= 3 in s on each box,
      // so the 16-point rule integrates it exactly.
      a(i, j) = integrate([&](double s) { return inner(s, tj, tj + h); }, si, si + h) / h;
      a(j, i) = a(i, j);
    }
  }

  auto hat = [](double t) { return t < 0.5 ? t : 1.0 - t; };
  Vector x(size);
  const double scale = 1.0 / std::sqrt(h);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double lo = static_cast<double>(i) * h;
    x(i) = scale * integrate_split(hat, lo, lo + h, 0.5);
  }
  return finish(ProblemKind::Deriv2, std::move(a), std::move(x));
}

TestProblem heat(std::size_t n) {
  require(n >= 4, "heat needs n >= 4, got " + std::to_string(n));
  const auto size = as_index(n);
  const double h = 1.0 / static_cast<double>(n);

  Vector column(size);
  for (Eigen::Index d = 0; d < size; ++d) column(d) = h * heat_kernel((static_cast<double>(d) + 0.5) * h);
  Matrix a = Matrix::Zero(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = column(i - j);
  }

  Vector x = Vector::Zero(size);
  for (Eigen::Index i = 1; i <= size / 2; ++i) {
    const double ti = static_cast<double>(i) * 20.0 / static_cast<double>(n);
    double value = 0.0;
    if (ti < 2.0) {
      value = 0.75 * ti * ti / 4.0;
    } else if (ti < 3.0) {
      value = 0.75 + (ti - 2.0) * (3.0 - ti);
    } else {
      value = 0.75 * std::exp(-(ti - 3.0) * 2.0);
    }
    x(i - 1) = value;
  }
  return finish(ProblemKind::Heat, std::move(a), std::move(x));
}

TestProblem make_problem(ProblemKind kind, std::size_t n) {
  switch (kind) {
    case ProblemKind::Phillips: return phillips(n);
    case ProblemKind::Shaw: return shaw(n);
    case ProblemKind::Deriv2: return deriv2(n);
    case ProblemKind::Heat: return heat(n);
  }
  fail(ErrorCode::InvalidArgument, "unknown problem kind");
}

}  // namespace tikreg
