#pragma once

#include <cstdint>
#include <string>

#include "dske/client.hpp"

// Share-math benchmark: times the initiator's share completion and the
// receiver's reconstruction-plus-validation in isolation, with communication,
// table reads and pad XORs excluded. This is the kernel the scaling
// measurements run on.

namespace dske::bench {

struct Config {
  std::uint16_t n = 3;
  std::uint16_t k = 2;
  std::size_t s = 3;              // shares reaching validation before discards
  std::size_t key_bytes = 1 << 16;
  std::size_t corrupt_transit = 0;   // discarded on arrival (bad message tag)
  std::size_t corrupt_matching = 0;  // wrong share bytes under a valid tag
  std::uint64_t seed = 1;
  int repetitions = 1;
};

struct Result {
  Config config;
  double complete_seconds = 0;  // initiator: extend k fixed shares to n
  double validate_seconds = 0;  // receiver: reconstruct, cross-check, key tag
  std::size_t subsets_tried = 0;
  bool agreed = false;

  double complete_ms_per_mbit() const;
  double validate_ms_per_mbit() const;
};

Result run_share_bench(const Config& config);

std::string csv_header();
std::string csv_row(const Result& result);

}  // namespace dske::bench
