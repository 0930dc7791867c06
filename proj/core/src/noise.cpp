#include "tikreg/noise.hpp"

#include <cmath>
#include <string>

#include "tikreg/error.hpp"

namespace tikreg {
namespace {

Vector gaussian(Eigen::Index m, RngStream& rng) {
  Vector g(m);
  for (Eigen::Index i = 0; i < m; ++i) g(i) = rng.normal();
  return g;
}

Vector scale_to_level(Vector e, double level, double b_norm) {
  const double e_norm = e.norm();
  if (!(e_norm > 0.0)) fail(ErrorCode::InvalidArgument, "noise draw has zero norm");
  e *= level * b_norm / e_norm;
  return e;
}

double checked_norm(const Vector& b_true, double level) {
  require(level > 0.0 && std::isfinite(level), "noise level must be positive");
  const double b_norm = b_true.norm();
  require(b_norm > 0.0, "noise level is relative to ||b_true||, which is zero");
  return b_norm;
}

}  // namespace

std::string_view to_string(NoiseKind kind) noexcept {
  return kind == NoiseKind::White ? "white" : "colored";
}

std::string_view to_string(NoiseBasis basis) noexcept {
  switch (basis) {
    case NoiseBasis::LeftSingular: return "svd";
    case NoiseBasis::RandomOrthogonal: return "randorth";
    case NoiseBasis::Dct: return "dct";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "white") return NoiseKind::White;
  if (name == "colored") return NoiseKind::Colored;
  fail(ErrorCode::InvalidArgument, "unknown noise kind '" + std::string(name) + "'");
}

NoiseBasis parse_noise_basis(std::string_view name) {
  if (name == "svd") return NoiseBasis::LeftSingular;
  if (name == "randorth") return NoiseBasis::RandomOrthogonal;
  if (name == "dct") return NoiseBasis::Dct;
  fail(ErrorCode::InvalidArgument, "unknown noise basis '" + std::string(name) + "'");
}

void validate(const NoiseSpec& spec) {
  require(spec.level > 0.0 && std::isfinite(spec.level), "noise level must be positive");
  require(spec.alpha >= 0.0 && std::isfinite(spec.alpha), "alpha must be >= 0");
}

OrthogonalBasis::OrthogonalBasis(Matrix q) : q_(std::move(q)) {
  require(q_.rows() == q_.cols() && q_.rows() >= 1, "orthogonal basis must be square");
  const double residual = orthogonality_residual(q_);
  if (!(residual <= 1e-8 * static_cast<double>(q_.rows()))) {
    fail(ErrorCode::NotOrthogonal,
         "basis orthogonality residual " + std::to_string(residual) + " exceeds 1e-8 * m");
  }
}

Vector violet_weights(Eigen::Index m, double alpha) {
  Vector w(m);
  if (m == 1) {
    w(0) = 1.0;
    return w;
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    const double exponent = -alpha + alpha * static_cast<double>(j) / static_cast<double>(m - 1);
    w(j) = std::pow(10.0, exponent);
  }
  return w;
}

Vector white_noise(const Vector& b_true, double level, RngStream& rng) {
  const double b_norm = checked_norm(b_true, level);
  return scale_to_level(gaussian(b_true.size(), rng), level, b_norm);
}

Vector colored_noise(const OrthogonalBasis& basis, double alpha, double level,
                     const Vector& b_true, RngStream& rng) {
  const double b_norm = checked_norm(b_true, level);
  require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be >= 0");
  require(basis.size() == b_true.size(), "colored noise basis size must match the data length");
  const Matrix& q = basis.matrix();
  const Vector g = gaussian(b_true.size(), rng);
  const Vector coeffs = violet_weights(q.rows(), alpha).cwiseProduct(q.transpose() * g);
  return scale_to_level(q * coeffs, level, b_norm);
}

Vector colored_noise(const Matrix& basis, double alpha, double level, const Vector& b_true,
                     RngStream& rng) {
  return colored_noise(OrthogonalBasis(basis), alpha, level, b_true, rng);
}

}  // namespace tikreg
