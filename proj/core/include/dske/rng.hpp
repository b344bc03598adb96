#pragma once

#include <cstdint>
#include <random>

#include "dske/bytes.hpp"

namespace dske {

// Deterministic random source. Simulation runs, provisioning in test mode and
// the scenario scripts all draw from this so that a (seed, script) pair
// replays to byte-identical results on any platform. Only the raw mt19937_64
// output is used; std::uniform_int_distribution is implementation-defined and
// would break golden traces.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  std::uint64_t below(std::uint64_t bound) {
    return bound == 0 ? 0 : engine_() % bound;
  }

  std::uint8_t next_byte() { return static_cast<std::uint8_t>(engine_() & 0xFF); }

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }

  void fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i + 8 <= out.size()) {
      std::uint64_t v = engine_();
      for (int j = 0; j < 8; ++j) out[i++] = static_cast<std::uint8_t>(v >> (8 * j));
    }
    if (i < out.size()) {
      std::uint64_t v = engine_();
      while (i < out.size()) {
        out[i++] = static_cast<std::uint8_t>(v & 0xFF);
        v >>= 8;
      }
    }
  }

  // OS entropy for non-test provisioning.
  static std::uint64_t os_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dske
