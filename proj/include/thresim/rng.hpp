#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, agent, step, asset), so parallel and serial execution
// consume identical randomness and paired runs can share sub-streams
// draw-for-draw.

namespace thresim::rng {

inline constexpr const char* kAlgorithmName = "philox4x32-10";

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Named sub-streams derived from the master seed.
enum class Stream : std::uint32_t {
  kSignal = 0,         // one news draw per step
  kThresholdGate = 1,  // per-agent Bernoulli(s) threshold refresh
  kWeightGate = 2,     // per-agent Bernoulli(s) weight refresh
  kInit = 3,           // initial threshold draws
  kReplicate = 4,      // per-replicate seed derivation
  kScratch = 5,        // test fixtures and synthetic series
};

inline Counter philox4x32(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += 0x9E3779B9u;
    key[1] += 0xBB67AE85u;
  }
  return ctr;
}

inline Key make_key(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// Counter layout: {stream, agent, low 32 bits of step, high step bits | asset}.
// Steps up to 2^60 and up to 16 assets stay collision-free.
inline Counter make_counter(Stream stream, std::uint32_t agent, std::uint64_t step,
                            std::uint32_t asset = 0) {
  return {static_cast<std::uint32_t>(stream), agent,
          static_cast<std::uint32_t>(step),
          static_cast<std::uint32_t>((step >> 32) << 4) | asset};
}

inline std::uint64_t to_u64(std::uint32_t lo, std::uint32_t hi) {
  return (std::uint64_t{hi} << 32) | lo;
}

/// 53-bit uniform in [0, 1).
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// 53-bit uniform in (0, 1]; safe as a log argument.
inline double to_unit_positive(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, Stream stream, std::uint32_t agent,
                        std::uint64_t step, std::uint32_t asset = 0) {
  const Counter out = philox4x32(make_counter(stream, agent, step, asset), make_key(seed));
  return to_unit(to_u64(out[0], out[1]));
}

inline bool bernoulli(std::uint64_t seed, Stream stream, std::uint32_t agent,
                      std::uint64_t step, std::uint32_t asset, double prob) {
  return uniform01(seed, stream, agent, step, asset) < prob;
}

/// Standard normal via Box-Muller on one 128-bit block (cosine branch).
inline double standard_normal(std::uint64_t seed, std::uint64_t index,
                              Stream stream = Stream::kSignal) {
  const Counter out = philox4x32(make_counter(stream, 0, index), make_key(seed));
  const double u1 = to_unit_positive(to_u64(out[0], out[1]));
  const double u2 = to_unit(to_u64(out[2], out[3]));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Deterministic per-replicate seed derivation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint32_t replicate) {
  if (replicate == 0) return master;
  const Counter out =
      philox4x32(make_counter(Stream::kReplicate, replicate, 0), make_key(master));
  return to_u64(out[0], out[1]);
}

/// Sequential N(0, std^2) draws; the common news signal for all agents.
class SignalStream {
 public:
  SignalStream(std::uint64_t seed, double std_dev) : seed_(seed), std_dev_(std_dev) {}

  double next() { return std_dev_ * standard_normal(seed_, index_++); }
  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t seed_;
  double std_dev_;
  std::uint64_t index_ = 0;
};

}  // namespace thresim::rng
