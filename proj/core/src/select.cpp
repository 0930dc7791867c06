#include "tikreg/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tikreg/error.hpp"

namespace tikreg {
namespace {

constexpr int kMaxIterations = 100;
constexpr double kResidualTolerance = 1e-10;

double floor_squared(const SpectralProblem& sp) {
  const auto rank = static_cast<Eigen::Index>(sp.rank);
  return sp.b_tilde.tail(sp.m() - rank).squaredNorm();
}

struct ResidualEval {
  double value;  // rho(nu)^2 - target^2
  double slope;  // d/dnu
  double rho;
};

ResidualEval evaluate(const SpectralProblem& sp, double nu, double floor2, double target) {
  const auto rank = static_cast<Eigen::Index>(sp.rank);
  double sum = floor2;
  double slope = 0.0;
  for (Eigen::Index j = 0; j < rank; ++j) {
    const double s2 = sp.sigma(j) * sp.sigma(j);
    const double b = sp.b_tilde(j);
    const double d = s2 + nu;
    const double r = nu * b / d;
    sum += r * r;
    slope += 2.0 * nu * b * b * s2 / (d * d * d);
  }
  return {sum - target * target, slope, std::sqrt(sum)};
}

double relative_error_spectral(const Vector& x_tilde, const Vector& truth_tilde, double truth_norm) {
  return (x_tilde - truth_tilde).norm() / truth_norm;
}

}  // namespace

void validate(const DiscrepancySpec& spec) {
  require(std::isfinite(spec.epsilon) && spec.epsilon > 0.0, "epsilon must be positive");
  require(std::isfinite(spec.eta) && spec.eta >= 1.0, "eta must be >= 1");
}

double residual_floor(const SpectralProblem& sp) { return std::sqrt(floor_squared(sp)); }

double tikhonov_residual(const SpectralProblem& sp, double mu) {
  return evaluate(sp, mu * mu, floor_squared(sp), 0.0).rho;
}

double discrepancy_mu(const SpectralProblem& sp, const DiscrepancySpec& spec) {
  validate(spec);
  const double target = spec.target();
  const double total = sp.b_tilde.norm();
  const double floor2 = floor_squared(sp);
  if (target >= total) {
    fail(ErrorCode::NoiseDominatesData,
         "eta*epsilon >= ||b||; x = 0 already satisfies the discrepancy principle");
  }
  if (target <= std::sqrt(floor2)) {
    fail(ErrorCode::DiscrepancyUnattainable,
         "eta*epsilon is at or below the residual floor of the least-squares problem");
  }
  const double s1sq = sp.sigma(0) * sp.sigma(0);

  // rho(nu) >= nu / (sigma_1^2 + nu) * ||b~||, which reaches the target here.
  double hi = target * s1sq / (total - target);
  if (!(hi > 0.0)) hi = std::numeric_limits<double>::min();
  while (evaluate(sp, hi, floor2, target).value < 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) fail(ErrorCode::IterationLimit, "cannot bracket the discrepancy root");
  }
  double lo = hi;
  while (evaluate(sp, lo, floor2, target).value >= 0.0) {
    lo *= 1e-4;
    if (!(lo > 0.0)) fail(ErrorCode::IterationLimit, "cannot bracket the discrepancy root");
  }

  double nu = std::sqrt(lo * hi);
  double best_nu = nu;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const ResidualEval e = evaluate(sp, nu, floor2, target);
    const double gap = std::abs(e.rho - target);
    if (gap < best_gap) {
      best_gap = gap;
      best_nu = nu;
    }
    if (gap <= 0.01 * kResidualTolerance * target) return std::sqrt(nu);
    if (e.value < 0.0) {
      lo = nu;
    } else {
      hi = nu;
    }
    if (hi / lo - 1.0 <= 4.0 * std::numeric_limits<double>::epsilon()) break;

    double next = e.slope > 0.0 ? nu - e.value / e.slope : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = std::sqrt(lo * hi);
    nu = next;
  }
  if (best_gap <= kResidualTolerance * target) return std::sqrt(best_nu);
  fail(ErrorCode::IterationLimit, "discrepancy Newton iteration did not converge");
}

std::size_t discrepancy_k(const SpectralProblem& sp, const DiscrepancySpec& spec) {
  validate(spec);
  const double target2 = spec.target() * spec.target();
  const Eigen::Index m = sp.m();
  // tails[k] = sum_{j >= k} b~_j^2 (0-based), accumulated from the end.
  std::vector<double> tails(static_cast<std::size_t>(m) + 1, 0.0);
  for (Eigen::Index j = m - 1; j >= 0; --j) {
    tails[static_cast<std::size_t>(j)] =
        tails[static_cast<std::size_t>(j) + 1] + sp.b_tilde(j) * sp.b_tilde(j);
  }
  for (std::size_t k = 0; k <= sp.rank; ++k) {
    if (tails[k] <= target2) return k;
  }
  fail(ErrorCode::DiscrepancyUnattainable, "no truncation index meets the discrepancy target");
}

SharedMuBundle shared_mu_pipeline(const SpectralProblem& sp, const DiscrepancySpec& spec,
                                  const std::vector<MethodFamily>& families) {
  SharedMuBundle bundle;
  const bool any_mu = std::any_of(families.begin(), families.end(),
                                  [](const MethodFamily& f) { return f.uses_mu(); });
  if (any_mu) bundle.mu = discrepancy_mu(sp, spec);

  bundle.methods.reserve(families.size());
  for (const MethodFamily& family : families) {
    BoundMethod bound{family, RegMethod{}, 0};
    if (family.uses_mu()) {
      bound.method = family.with_mu(bundle.mu);
      bound.k_effective = build_modification(bound.method, sp.sigma).k_effective;
    } else {
      const std::size_t k = discrepancy_k(sp, spec);
      bound.method = RegMethod::tsvd(k);
      bound.k_effective = k;
    }
    bundle.methods.push_back(bound);
  }
  return bundle;
}

OptimalParameter optimal_params_spectral(const SpectralProblem& sp, const Vector& x_true_tilde,
                                         const MethodFamily& family) {
  require(x_true_tilde.size() == sp.n(), "x_true length must equal n");
  const double truth_norm = x_true_tilde.norm();
  require(truth_norm > 0.0, "x_true must be nonzero");
  OptimalParameter out{family};

  if (!family.uses_mu()) {
    // x~_k differs from x~_{k-1} only in component k, so track the squared
    // error incrementally.
    double err2 = x_true_tilde.squaredNorm();
    double best = err2;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k <= sp.rank; ++k) {
      const auto j = static_cast<Eigen::Index>(k - 1);
      const double coeff = sp.b_tilde(j) / sp.sigma(j);
      const double truth = x_true_tilde(j);
      err2 += (coeff - truth) * (coeff - truth) - truth * truth;
      if (err2 < best) {
        best = err2;
        best_k = k;
      }
    }
    out.k = best_k;
    out.error = relative_error_spectral(
        spectral_coefficients(sp, RegMethod::tsvd(best_k)), x_true_tilde, truth_norm);
    out.grid_error = out.error;
    return out;
  }

  require(sp.rank >= 1, "optimal mu search needs a nonzero spectrum");
  auto error_at = [&](double log_mu) {
    return relative_error_spectral(spectral_coefficients(sp, family.with_mu(std::exp(log_mu))),
                                   x_true_tilde, truth_norm);
  };

  constexpr int kGrid = 50;
  const double lo_end = std::log(sp.sigma(static_cast<Eigen::Index>(sp.rank) - 1) * 1e-3);
  const double hi_end = std::log(sp.sigma(0) * 1e3);
  std::vector<double> grid(kGrid);
  std::vector<double> grid_err(kGrid);
  int best_i = 0;
  for (int i = 0; i < kGrid; ++i) {
    grid[i] = lo_end + (hi_end - lo_end) * i / (kGrid - 1);
    grid_err[i] = error_at(grid[i]);
    if (grid_err[i] < grid_err[best_i]) best_i = i;
  }
  double best_log = grid[best_i];
  double best_err = grid_err[best_i];
  out.grid_error = best_err;

  double a = grid[std::max(best_i - 1, 0)];
  double b = grid[std::min(best_i + 1, kGrid - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = error_at(c);
  double fd = error_at(d);
  auto consider = [&](double x, double f) {
    if (f < best_err) {
      best_err = f;
      best_log = x;
    }
  };
  consider(c, fc);
  consider(d, fd);
  // Width in log mu below log(1 + 1e-6) means relative width 1e-6 in mu.
  const double width = std::log1p(1e-6);
  for (int iter = 0; iter < 200 && b - a > width; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = error_at(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = error_at(d);
      consider(d, fd);
    }
  }
  out.mu = std::exp(best_log);
  out.error = best_err;
  out.k = build_modification(family.with_mu(out.mu), sp.sigma).k_effective;
  return out;
}

OptimalParameter optimal_params(const SpectralProblem& sp, const Vector& x_true,
                                const MethodFamily& family) {
  require(x_true.size() == sp.n(), "x_true length must equal n");
  return optimal_params_spectral(sp, sp.V.transpose() * x_true, family);
}

}  // namespace tikreg
