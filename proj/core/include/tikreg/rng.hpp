#pragma once

#include <cstdint>
#include <random>

namespace tikreg {

/// Deterministic random stream keyed by (seed, stream id). Two streams built
/// from the same pair produce the same sequence; distinct stream ids give
/// statistically independent sequences for parallel trials.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  double normal();
  double uniform();  // [0, 1)
  std::uint64_t next_u64() { return engine_(); }

private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Stream id for trial `trial` of noise level `level` under one master seed.
std::uint64_t trial_stream_id(std::uint64_t level_index, std::uint64_t trial_index) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace tikreg
