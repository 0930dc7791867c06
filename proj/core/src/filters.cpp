#include "tikreg/filters.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "tikreg/error.hpp"
#include "tikreg/matrix_io.hpp"

namespace tikreg {
namespace {

bool is_truncating(MethodKind kind) { return kind == MethodKind::Tsvd || kind == MethodKind::CutK; }

double sq(double v) { return v * v; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

SpectralProblem to_spectral(const SvdFactorization& f, const Vector& b, double rank_tol) {
  require(f.U.rows() == b.size(), "to_spectral: U and b disagree in length");
  require(f.V.rows() == f.sigma.size() && f.U.rows() >= f.sigma.size(),
          "to_spectral: inconsistent factorization");
  return SpectralProblem{f.sigma, f.U.transpose() * b, f.V, numerical_rank(f.sigma, rank_tol)};
}

RegMethod RegMethod::tsvd(std::size_t k) { return RegMethod{MethodKind::Tsvd, 0.0, k, 0.0, true}; }
RegMethod RegMethod::tikhonov(double mu) { return RegMethod{MethodKind::TikhonovIdentity, mu}; }
RegMethod RegMethod::frmod(double mu) { return RegMethod{MethodKind::FrMod, mu}; }
RegMethod RegMethod::shift_k(double mu) { return RegMethod{MethodKind::ShiftK, mu}; }
RegMethod RegMethod::cut_k(double mu) { return RegMethod{MethodKind::CutK, mu}; }
RegMethod RegMethod::cut_k_index(std::size_t k) {
  return RegMethod{MethodKind::CutK, 0.0, k, 0.0, true};
}
RegMethod RegMethod::scaled(double mu) { return RegMethod{MethodKind::Scaled, mu}; }
RegMethod RegMethod::scaled_k(double mu) { return RegMethod{MethodKind::ScaledK, mu}; }
RegMethod RegMethod::theta_blend(double mu, double theta) {
  return RegMethod{MethodKind::Theta, mu, 0, theta};
}

RegMethod MethodFamily::with_mu(double mu) const {
  switch (kind) {
    case MethodKind::Tsvd: break;
    case MethodKind::TikhonovIdentity: return RegMethod::tikhonov(mu);
    case MethodKind::FrMod: return RegMethod::frmod(mu);
    case MethodKind::ShiftK: return RegMethod::shift_k(mu);
    case MethodKind::CutK: return RegMethod::cut_k(mu);
    case MethodKind::Scaled: return RegMethod::scaled(mu);
    case MethodKind::ScaledK: return RegMethod::scaled_k(mu);
    case MethodKind::Theta: return RegMethod::theta_blend(mu, theta);
  }
  fail(ErrorCode::InvalidArgument, "tsvd is parameterized by k, not mu");
}

std::string MethodFamily::name() const {
  switch (kind) {
    case MethodKind::Tsvd: return "tsvd";
    case MethodKind::TikhonovIdentity: return "tikhonov";
    case MethodKind::FrMod: return "frmod";
    case MethodKind::ShiftK: return "shiftk";
    case MethodKind::CutK: return "cutk";
    case MethodKind::Scaled: return "scaled";
    case MethodKind::ScaledK: return "scaledk";
    case MethodKind::Theta: return "theta:" + format_double(theta);
  }
  return "unknown";
}

MethodFamily parse_method_family(std::string_view text) {
  text = trim(text);
  if (text == "tsvd") return {MethodKind::Tsvd};
  if (text == "tikhonov" || text == "mui") return {MethodKind::TikhonovIdentity};
  if (text == "frmod") return {MethodKind::FrMod};
  if (text == "shiftk") return {MethodKind::ShiftK};
  if (text == "cutk") return {MethodKind::CutK};
  if (text == "scaled") return {MethodKind::Scaled};
  if (text == "scaledk") return {MethodKind::ScaledK};
  if (text.starts_with("theta:")) {
    const std::string_view value = text.substr(6);
    double theta = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), theta);
    if (ec != std::errc() || ptr != value.data() + value.size() || !(theta >= 0.0 && theta <= 1.0)) {
      fail(ErrorCode::InvalidArgument, "theta must be a number in [0, 1], got '" +
                                           std::string(value) + "'");
    }
    return {MethodKind::Theta, theta};
  }
  fail(ErrorCode::InvalidArgument, "unknown method '" + std::string(text) + "'");
}

std::vector<MethodFamily> parse_method_list(std::string_view comma_separated) {
  std::vector<MethodFamily> out;
  while (!trim(comma_separated).empty()) {
    const auto comma = comma_separated.find(',');
    out.push_back(parse_method_family(comma_separated.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    comma_separated.remove_prefix(comma + 1);
  }
  return out;
}

void validate(const RegMethod& method, Eigen::Index n) {
  require(std::isfinite(method.mu) && method.mu >= 0.0, "mu must be finite and >= 0");
  require(std::isfinite(method.theta) && method.theta >= 0.0 && method.theta <= 1.0,
          "theta must lie in [0, 1]");
  if (method.kind == MethodKind::Tsvd || (method.kind == MethodKind::CutK && method.cut_by_index)) {
    require(method.k <= static_cast<std::size_t>(n), "truncation index exceeds n");
  }
}

std::size_t monotone_split_index(const Vector& sigma, double mu, double theta) {
  const Eigen::Index n = sigma.size();
  const double s1sq = n > 0 ? sq(sigma(0)) : 0.0;
  const double mu2 = sq(mu);
  // k is 1-based: compares sigma_k (index k-1) with sigma_{k+1} (index k).
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    const double left = sq(sigma(k - 1));
    const double right = sq(sigma(k));
    const bool ok = theta == 0.0 ? left >= right + mu2
                                 : left * (s1sq + theta * mu2) >= s1sq * (right + mu2);
    if (ok) return static_cast<std::size_t>(k);
  }
  return 0;
}

std::size_t cut_index(const Vector& sigma, double mu) {
  std::size_t k = 0;
  while (k < static_cast<std::size_t>(sigma.size()) && sigma(static_cast<Eigen::Index>(k)) > mu) ++k;
  return k;
}

Vector blended_tail_dsq(const Vector& sigma, double mu, double theta, std::size_t k) {
  const Eigen::Index n = sigma.size();
  Vector dsq = Vector::Zero(n);
  if (n == 0) return dsq;
  const double s1sq = sq(sigma(0));
  const double mu2 = sq(mu);
  const double denom = s1sq + theta * mu2;
  if (!(denom > 0.0)) return dsq;
  const double factor = mu2 / denom;
  for (Eigen::Index j = static_cast<Eigen::Index>(k); j < n; ++j) {
    dsq(j) = factor * (s1sq - theta * sq(sigma(j)));
  }
  return dsq;
}

Vector shifted_tail_dsq(const Vector& sigma, double mu, std::size_t k) {
  Vector dsq = Vector::Zero(sigma.size());
  for (Eigen::Index j = static_cast<Eigen::Index>(k); j < sigma.size(); ++j) dsq(j) = sq(mu);
  return dsq;
}

DiagonalModification build_modification(const RegMethod& method, const Vector& sigma) {
  const Eigen::Index n = sigma.size();
  validate(method, n);
  const double mu2 = sq(method.mu);
  DiagonalModification out{Vector::Zero(n), 0};

  switch (method.kind) {
    case MethodKind::TikhonovIdentity:
      out.dsq.setConstant(mu2);
      break;
    case MethodKind::FrMod:
      for (Eigen::Index j = 0; j < n; ++j) out.dsq(j) = std::max(mu2 - sq(sigma(j)), 0.0);
      out.k_effective = cut_index(sigma, method.mu);
      break;
    case MethodKind::ShiftK:
      out.k_effective = monotone_split_index(sigma, method.mu, 0.0);
      out.dsq = shifted_tail_dsq(sigma, method.mu, out.k_effective);
      break;
    case MethodKind::Tsvd:
    case MethodKind::CutK:
      out.k_effective = method.kind == MethodKind::Tsvd || method.cut_by_index
                            ? method.k
                            : cut_index(sigma, method.mu);
      for (Eigen::Index j = static_cast<Eigen::Index>(out.k_effective); j < n; ++j) {
        out.dsq(j) = -sq(sigma(j));
      }
      break;
    case MethodKind::Scaled:
      out.dsq = blended_tail_dsq(sigma, method.mu, 1.0, 1);
      break;
    case MethodKind::ScaledK:
      out.k_effective = monotone_split_index(sigma, method.mu, 1.0);
      out.dsq = blended_tail_dsq(sigma, method.mu, 1.0, out.k_effective);
      break;
    case MethodKind::Theta:
      out.k_effective = monotone_split_index(sigma, method.mu, method.theta);
      out.dsq = blended_tail_dsq(sigma, method.mu, method.theta, out.k_effective);
      break;
  }
  return out;
}

Vector spectral_coefficients(const SpectralProblem& sp, const RegMethod& method,
                             SolveOptions options, std::size_t* zeroed, std::size_t* k_effective) {
  const Eigen::Index n = sp.n();
  require(sp.m() >= n && sp.V.rows() == n && sp.V.cols() == n,
          "solve_spectral: inconsistent spectral problem");
  if (method.kind == MethodKind::Tsvd) {
    require(method.k <= sp.rank, "tsvd truncation index exceeds the numerical rank");
  }
  const DiagonalModification mod = build_modification(method, sp.sigma);
  const auto rank = static_cast<Eigen::Index>(sp.rank);
  const bool truncating = is_truncating(method.kind);

  Vector x_tilde = Vector::Zero(n);
  std::size_t nulls = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double bj = sp.b_tilde(j);
    if (j >= rank) {
      // Numerically null direction: sigma_j counts as zero, so only the
      // modification itself could have regularized it.
      if (!truncating && !(mod.dsq(j) > 0.0) && bj != 0.0) {
        if (options.strict) {
          fail(ErrorCode::UnregularizedNullComponent,
               "component " + std::to_string(j + 1) + " has zero denominator and nonzero data");
        }
        ++nulls;
      }
      continue;
    }
    const double s = sp.sigma(j);
    const double denom = s * s + mod.dsq(j);
    if (denom > 0.0) x_tilde(j) = s * bj / denom;
  }
  if (zeroed != nullptr) *zeroed = nulls;
  if (k_effective != nullptr) *k_effective = mod.k_effective;
  return x_tilde;
}

SpectralSolution solve_spectral_detailed(const SpectralProblem& sp, const RegMethod& method,
                                         SolveOptions options) {
  SpectralSolution out;
  out.x_tilde = spectral_coefficients(sp, method, options, &out.zeroed_null_components,
                                      &out.k_effective);
  out.x = sp.V * out.x_tilde;
  return out;
}

Vector solve_spectral(const SpectralProblem& sp, const RegMethod& method, SolveOptions options) {
  return solve_spectral_detailed(sp, method, options).x;
}

Vector filter_factors(const Vector& sigma, std::size_t rank, const RegMethod& method) {
  validate(method, sigma.size());
  const auto ell = static_cast<Eigen::Index>(rank);
  require(ell <= sigma.size(), "rank exceeds the number of singular values");
  Vector phi(ell);
  if (ell == 0) return phi;

  const double mu2 = sq(method.mu);
  const double s1sq = sq(sigma(0));
  auto tikhonov = [&](Eigen::Index j) {
    const double s2 = sq(sigma(j));
    return s2 / (s2 + mu2);
  };
  auto blended = [&](Eigen::Index j, double theta) {
    const double s2 = sq(sigma(j));
    return s2 * (s1sq + theta * mu2) / (s1sq * (s2 + mu2));
  };
  auto split = [&](std::size_t k, auto&& tail) {
    for (Eigen::Index j = 0; j < ell; ++j) {
      phi(j) = j < static_cast<Eigen::Index>(k) ? 1.0 : tail(j);
    }
  };

  switch (method.kind) {
    case MethodKind::Tsvd:
    case MethodKind::CutK: {
      const std::size_t k = method.kind == MethodKind::Tsvd || method.cut_by_index
                                ? method.k
                                : cut_index(sigma, method.mu);
      split(k, [](Eigen::Index) { return 0.0; });
      break;
    }
    case MethodKind::TikhonovIdentity:
      for (Eigen::Index j = 0; j < ell; ++j) phi(j) = tikhonov(j);
      break;
    case MethodKind::FrMod:
      for (Eigen::Index j = 0; j < ell; ++j) {
        phi(j) = sigma(j) >= method.mu ? 1.0 : sq(sigma(j)) / mu2;
      }
      break;
    case MethodKind::ShiftK:
      split(monotone_split_index(sigma, method.mu, 0.0), tikhonov);
      break;
    case MethodKind::Scaled:
      for (Eigen::Index j = 0; j < ell; ++j) phi(j) = blended(j, 1.0);
      break;
    case MethodKind::ScaledK:
      split(monotone_split_index(sigma, method.mu, 1.0),
            [&](Eigen::Index j) { return blended(j, 1.0); });
      break;
    case MethodKind::Theta:
      split(monotone_split_index(sigma, method.mu, method.theta),
            [&](Eigen::Index j) { return blended(j, method.theta); });
      break;
  }
  return phi;
}

Vector filter_factors(const SpectralProblem& sp, const RegMethod& method) {
  return filter_factors(sp.sigma, sp.rank, method);
}

void write_filter_factor_csv(std::ostream& out, const Vector& sigma, std::size_t rank,
                             const std::vector<RegMethod>& methods,
                             const std::vector<std::string>& column_names) {
  require(methods.size() == column_names.size(), "one column name per method");
  std::vector<Vector> columns;
  columns.reserve(methods.size());
  for (const RegMethod& m : methods) columns.push_back(filter_factors(sigma, rank, m));

  out << "j,sigma";
  for (const std::string& name : column_names) out << ',' << name;
  out << '\n';
  for (std::size_t j = 0; j < rank; ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    out << (j + 1) << ',' << format_double(sigma(row));
    for (const Vector& c : columns) out << ',' << format_double(c(row));
    out << '\n';
  }
}

}  // namespace tikreg
