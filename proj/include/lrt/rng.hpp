#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace lrt {

/// SplitMix64 finaliser; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for sub-stream `stream` of a run seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// Stable 64-bit FNV-1a hash, for deriving per-country streams.
std::uint64_t stable_hash(std::string_view text) noexcept;

/// Standard normal variates from std::mt19937_64 (bit-exact across standard
/// libraries) through the Box-Muller transform. No rejection step, so the
/// variate sequence depends only on the seed.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next();
  void fill(std::span<double> out);

 private:
  double uniform_open0();  // (0, 1]

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lrt
