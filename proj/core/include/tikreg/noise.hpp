#pragma once

#include <string_view>

#include "tikreg/linalg.hpp"
#include "tikreg/rng.hpp"

namespace tikreg {

enum class NoiseKind { White, Colored };
enum class NoiseBasis { LeftSingular, RandomOrthogonal, Dct };

std::string_view to_string(NoiseKind kind) noexcept;
std::string_view to_string(NoiseBasis basis) noexcept;
NoiseKind parse_noise_kind(std::string_view name);
/// Accepts `svd`, `randorth` and `dct`.
NoiseBasis parse_noise_basis(std::string_view name);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::White;
  double level = 0.01;  // ||e|| / ||b_true||
  double alpha = 1.0;   // colored only
  NoiseBasis basis = NoiseBasis::LeftSingular;
};

void validate(const NoiseSpec& spec);

/// Orthogonal matrix checked once at construction so repeated colored draws
/// do not pay for the O(m^3) orthogonality test.
class OrthogonalBasis {
public:
  explicit OrthogonalBasis(Matrix q);

  const Matrix& matrix() const noexcept { return q_; }
  Eigen::Index size() const noexcept { return q_.rows(); }

private:
  Matrix q_;
};

/// Log-spaced weights 10^(-alpha + alpha (j - 1) / (m - 1)), j = 1..m.
Vector violet_weights(Eigen::Index m, double alpha);

/// i.i.d. standard normal draw scaled so ||e|| = level * ||b_true|| exactly.
Vector white_noise(const Vector& b_true, double level, RngStream& rng);

/// e = Q (w .* (Q^T g)) with g standard normal, then scaled to the level.
Vector colored_noise(const OrthogonalBasis& basis, double alpha, double level,
                     const Vector& b_true, RngStream& rng);
Vector colored_noise(const Matrix& basis, double alpha, double level, const Vector& b_true,
                     RngStream& rng);

}  // namespace tikreg
