#pragma once

#include <cstdint>
#include <random>

namespace fwos {

// Stream-id layout. Monte Carlo path i of training point k draws from stream
// (k << 32) + i; the point location itself uses path slot kLocationSlot.
// Streams with the top bit set are reserved for training and evaluation.
inline constexpr std::uint64_t kLocationSlot = 0xFFFFFFFFull;
inline constexpr std::uint64_t kReservedStreamBase = 1ull << 63;

constexpr std::uint64_t path_stream_id(std::uint64_t point, std::uint64_t path) {
  return (point << 32) + path;
}

constexpr std::uint64_t location_stream_id(std::uint64_t point) {
  return (point << 32) + kLocationSlot;
}

// Deterministic random-variate source keyed by (seed, stream id). Uses only
// generator pieces whose output the standard fixes bit-for-bit, so the same
// key reproduces the same sequence on any conforming toolchain.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller (one variate per call).
  double normal();
  std::uint64_t next_u64() { return engine_(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace fwos
