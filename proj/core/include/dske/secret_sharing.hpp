#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dske/bytes.hpp"

// (n,k) secret sharing over byte strings. Two schemes: polynomial shares over
// GF(2^8), one degree-(k-1) polynomial per byte offset with a common
// coordinate assignment, and the n = k bitwise-XOR scheme. Coordinate 0 is
// reserved for the secret; hubs get coordinates 1..n.

namespace dske {

enum class SchemeKind : std::uint8_t { shamir = 0, xor_all = 1 };

struct SchemeParams {
  std::uint16_t n = 1;
  std::uint16_t k = 1;
  SchemeKind kind = SchemeKind::shamir;

  bool operator==(const SchemeParams&) const = default;
};

// Throws BadParams unless 1 <= k <= n <= 255 and (xor_all implies k == n).
void validate_params(const SchemeParams& params);

struct Share {
  std::uint8_t x = 0;  // nonzero hub coordinate
  Bytes data;

  bool operator==(const Share&) const = default;
};

// Reconstruction output: the value of the share polynomial at coordinate 0.
// The first l bytes key the key tag, the remainder is the agreed key.
struct SecretBundle {
  Bytes secret;

  ByteView tag_key(std::size_t l) const { return ByteView(secret).first(l); }
  ByteView key_bits(std::size_t l) const { return ByteView(secret).subspan(l); }

  bool operator==(const SecretBundle&) const = default;
};

// Extends k fixed shares to the full share list at coordinates 1..n plus the
// secret. Fixed coordinates must be distinct, nonzero and <= n; data rows must
// have equal length. The returned list is ordered by coordinate and contains
// the fixed shares unchanged.
std::pair<std::vector<Share>, SecretBundle> complete_shares(
    const SchemeParams& params, const std::vector<Share>& fixed);

// Secret from at least k shares (first k are used for the polynomial scheme,
// all n for XOR).
SecretBundle reconstruct(const SchemeParams& params, const std::vector<Share>& subset);

// Expected share values at every coordinate 1..n, derived from k known
// shares. XOR has no spare coordinates and returns the input unchanged.
std::vector<Share> derive_other_shares(const SchemeParams& params,
                                       const std::vector<Share>& subset);

// Interpolation engine for one fixed coordinate subset. Built once per
// subset, then applied across megabytes of offsets. The per-offset
// coefficient transform costs k^2 table lookups; evaluating the polynomial at
// further coordinates from the coefficients is cheap by comparison, which is
// what makes receiver-side validation of extra shares affordable.
class ShamirEngine {
 public:
  // Coordinates must be distinct and nonzero.
  explicit ShamirEngine(std::vector<std::uint8_t> xs);

  std::size_t k() const { return xs_.size(); }
  const std::vector<std::uint8_t>& coordinates() const { return xs_; }

  // Per-offset polynomial coefficients from k share rows of equal length.
  // Result r satisfies: share value at x, offset p = sum_j r[j][p] * x^j.
  std::vector<Bytes> coefficients(const std::vector<ByteView>& rows) const;

  // Horner evaluation of a coefficient set at one coordinate.
  static Bytes evaluate(const std::vector<Bytes>& coeff, std::uint8_t x);

  // Direct weighted combination of the rows at one target coordinate,
  // bypassing the coefficient transform. Used by the sender when extending
  // shares, where only a handful of target coordinates is needed.
  Bytes combine_at(const std::vector<ByteView>& rows, std::uint8_t x) const;

 private:
  std::vector<std::uint8_t> xs_;
  std::vector<std::uint8_t> basis_;   // k*k, basis_[i*k+j] = x^j coeff of l_i
  std::vector<std::uint8_t> tables_;  // k*k premultiplied 256-byte rows
};

}  // namespace dske
