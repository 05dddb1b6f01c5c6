#pragma once

#include <cstdint>

namespace invedit {

// SplitMix64 (Steele, Lea, Flood 2014). Increment 0x9e3779b97f4a7c15,
// mix constants 0xbf58476d1ce4e5b9 / 0x94d049bb133111eb. Used only to
// expand a 64-bit seed into the 256 bits Pcg64 needs.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// PCG64, the XSL-RR 128/64 member of the PCG family (O'Neill 2014).
//   state' = state * MUL + inc        (128-bit LCG)
//   output = rotr64(high64(state) ^ low64(state), state >> 122)
// MUL = 0x2360ed051fc65da44385df649fccf645; inc = (stream << 1) | 1.
// Seeding follows the reference pcg64_srandom: step, add seed, step.
// A u64 seed is expanded with SplitMix64 into the 128-bit initial state
// and the 128-bit stream selector, in that order (4 draws).
//
// Identical seeds give bit-identical streams on every platform; all
// sampled values in this project flow from this generator.
class Pcg64 {
public:
  using u128 = unsigned __int128;

  explicit Pcg64(std::uint64_t seed) {
    std::uint64_t sm = seed;
    const std::uint64_t s_hi = splitmix64_next(sm);
    const std::uint64_t s_lo = splitmix64_next(sm);
    const std::uint64_t q_hi = splitmix64_next(sm);
    const std::uint64_t q_lo = splitmix64_next(sm);
    seed_raw((u128(s_hi) << 64) | s_lo, (u128(q_hi) << 64) | q_lo);
  }

  // Reference seeding with full-width state and stream selector.
  Pcg64(u128 initstate, u128 initseq) { seed_raw(initstate, initseq); }

  std::uint64_t next_u64() {
    step();
    const std::uint64_t xored =
        static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
    const unsigned rot = static_cast<unsigned>(state_ >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  // 53-bit uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the trigonometric Box-Muller transform.
  // u1 = (bits53 + 1) * 2^-53 in (0, 1], u2 in [0, 1); the sine partner
  // of each pair is cached, so draws come in deterministic pairs.
  double next_normal();

private:
  void seed_raw(u128 initstate, u128 initseq) {
    inc_ = (initseq << 1) | 1;
    state_ = 0;
    step();
    state_ += initstate;
    step();
  }

  void step() { state_ = state_ * kMul + inc_; }

  static constexpr u128 kMul = (u128(0x2360ed051fc65da4ull) << 64) | 0x4385df649fccf645ull;

  u128 state_ = 0;
  u128 inc_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

// Stable derivation of per-item seeds from a run-level seed, used by batch
// commands so entry k's stream does not depend on processing order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t s = base ^ (0xa0761d6478bd642full + index * 0xe7037ed1a0b428dbull);
  return splitmix64_next(s);
}

}  // namespace invedit
