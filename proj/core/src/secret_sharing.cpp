#include "dske/secret_sharing.hpp"

#include <algorithm>
#include <array>
#include <cstring>

#include "dske/error.hpp"
#include "dske/gf256.hpp"

namespace dske {

namespace {

constexpr std::size_t kChunk = 4096;

void check_distinct_nonzero(const std::vector<std::uint8_t>& xs) {
  std::array<bool, 256> seen{};
  for (std::uint8_t x : xs) {
    if (x == 0) throw DskeError(ErrorCode::bad_params, "share coordinate 0 is reserved");
    if (seen[x]) throw DskeError(ErrorCode::duplicate_coordinate);
    seen[x] = true;
  }
}

void check_equal_lengths(const std::vector<Share>& shares) {
  for (std::size_t i = 1; i < shares.size(); ++i) {
    if (shares[i].data.size() != shares[0].data.size()) {
      throw DskeError(ErrorCode::length_mismatch, "share lengths differ");
    }
  }
}

std::vector<ByteView> rows_of(const std::vector<Share>& shares, std::size_t count) {
  std::vector<ByteView> rows;
  rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) rows.push_back(ByteView(shares[i].data));
  return rows;
}

Bytes xor_all_rows(const std::vector<ByteView>& rows) {
  Bytes out(rows[0].begin(), rows[0].end());
  for (std::size_t i = 1; i < rows.size(); ++i) xor_into(out, rows[i]);
  return out;
}

}  // namespace

void validate_params(const SchemeParams& params) {
  if (params.k < 1 || params.k > params.n) {
    throw DskeError(ErrorCode::bad_params, "need 1 <= k <= n");
  }
  if (params.n > 255) {
    throw DskeError(ErrorCode::bad_params, "coordinate space limits n to 255");
  }
  if (params.kind == SchemeKind::xor_all && params.k != params.n) {
    throw DskeError(ErrorCode::bad_params, "xor scheme requires k == n");
  }
}

ShamirEngine::ShamirEngine(std::vector<std::uint8_t> xs) : xs_(std::move(xs)) {
  if (xs_.empty()) throw DskeError(ErrorCode::bad_params, "empty coordinate set");
  check_distinct_nonzero(xs_);
  const std::size_t k = xs_.size();

  // Lagrange basis polynomial for each input coordinate:
  //   l_i(x) = prod_{j != i} (x + x_j) / (x_i + x_j)
  basis_.assign(k * k, 0);
  std::vector<std::uint8_t> poly(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::fill(poly.begin(), poly.end(), 0);
    poly[0] = 1;
    std::size_t degree = 0;
    std::uint8_t denom = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      // poly *= (x + x_j)
      for (std::size_t t = degree + 1; t > 0; --t) {
        poly[t] = gf256::add(poly[t - 1], gf256::mul(poly[t], xs_[j]));
      }
      poly[0] = gf256::mul(poly[0], xs_[j]);
      ++degree;
      denom = gf256::mul(denom, gf256::add(xs_[i], xs_[j]));
    }
    std::uint8_t scale = gf256::inv(denom);
    for (std::size_t t = 0; t < k; ++t) {
      basis_[i * k + t] = gf256::mul(poly[t], scale);
    }
  }

  tables_.resize(k * k * 256);
  for (std::size_t i = 0; i < k * k; ++i) {
    gf256::fill_mul_row(basis_[i], tables_.data() + i * 256);
  }
}

std::vector<Bytes> ShamirEngine::coefficients(const std::vector<ByteView>& rows) const {
  const std::size_t k = xs_.size();
  if (rows.size() != k) throw DskeError(ErrorCode::bad_params, "row count != k");
  const std::size_t len = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != len) throw DskeError(ErrorCode::length_mismatch);
  }

  std::vector<Bytes> coeff(k, Bytes(len, 0));
  std::vector<std::uint8_t> acc(k * kChunk);
  for (std::size_t base = 0; base < len; base += kChunk) {
    const std::size_t c = std::min(kChunk, len - base);
    std::memset(acc.data(), 0, k * c);
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint8_t* y = rows[i].data() + base;
      for (std::size_t j = 0; j < k; ++j) {
        const std::uint8_t* table = tables_.data() + (i * k + j) * 256;
        std::uint8_t* out = acc.data() + j * c;
        for (std::size_t p = 0; p < c; ++p) out[p] ^= table[y[p]];
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      std::memcpy(coeff[j].data() + base, acc.data() + j * c, c);
    }
  }
  return coeff;
}

Bytes ShamirEngine::evaluate(const std::vector<Bytes>& coeff, std::uint8_t x) {
  const std::size_t k = coeff.size();
  const std::size_t len = coeff[0].size();
  if (x == 0 || k == 1) return coeff[0];
  Bytes out(coeff[k - 1]);
  for (std::size_t j = k - 1; j-- > 0;) {
    const std::uint8_t* c = coeff[j].data();
    for (std::size_t p = 0; p < len; ++p) {
      out[p] = gf256::add(gf256::mul(out[p], x), c[p]);
    }
  }
  return out;
}

Bytes ShamirEngine::combine_at(const std::vector<ByteView>& rows, std::uint8_t x) const {
  const std::size_t k = xs_.size();
  if (rows.size() != k) throw DskeError(ErrorCode::bad_params, "row count != k");
  const std::size_t len = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != len) throw DskeError(ErrorCode::length_mismatch);
  }

  Bytes out(len, 0);
  std::array<std::uint8_t, 256> table;
  for (std::size_t i = 0; i < k; ++i) {
    // Lagrange weight of row i at the target coordinate.
    std::uint8_t num = 1, den = 1;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      num = gf256::mul(num, gf256::add(x, xs_[j]));
      den = gf256::mul(den, gf256::add(xs_[i], xs_[j]));
    }
    std::uint8_t w = gf256::div(num, den);
    if (w == 0) continue;
    gf256::fill_mul_row(w, table.data());
    const std::uint8_t* y = rows[i].data();
    for (std::size_t p = 0; p < len; ++p) out[p] ^= table[y[p]];
  }
  return out;
}

std::pair<std::vector<Share>, SecretBundle> complete_shares(
    const SchemeParams& params, const std::vector<Share>& fixed) {
  validate_params(params);
  if (fixed.size() != params.k) {
    throw DskeError(ErrorCode::bad_params, "need exactly k fixed shares");
  }
  check_equal_lengths(fixed);
  std::vector<std::uint8_t> xs;
  xs.reserve(fixed.size());
  for (const Share& s : fixed) {
    if (s.x > params.n) throw DskeError(ErrorCode::bad_params, "coordinate exceeds n");
    xs.push_back(s.x);
  }
  check_distinct_nonzero(xs);

  if (params.kind == SchemeKind::xor_all) {
    auto rows = rows_of(fixed, fixed.size());
    SecretBundle bundle{xor_all_rows(rows)};
    std::vector<Share> all(fixed);
    std::sort(all.begin(), all.end(), [](const Share& a, const Share& b) { return a.x < b.x; });
    return {std::move(all), std::move(bundle)};
  }

  ShamirEngine engine(xs);
  auto rows = rows_of(fixed, fixed.size());

  std::vector<Share> all;
  all.reserve(params.n);
  std::array<const Share*, 256> by_x{};
  for (const Share& s : fixed) by_x[s.x] = &s;
  for (std::uint16_t x = 1; x <= params.n; ++x) {
    if (by_x[x] != nullptr) {
      all.push_back(*by_x[x]);
    } else {
      all.push_back(Share{static_cast<std::uint8_t>(x),
                          engine.combine_at(rows, static_cast<std::uint8_t>(x))});
    }
  }
  SecretBundle bundle{engine.combine_at(rows, 0)};
  return {std::move(all), std::move(bundle)};
}

SecretBundle reconstruct(const SchemeParams& params, const std::vector<Share>& subset) {
  validate_params(params);
  if (subset.size() < params.k) throw DskeError(ErrorCode::insufficient_shares);
  check_equal_lengths(subset);

  if (params.kind == SchemeKind::xor_all) {
    std::vector<std::uint8_t> xs;
    for (const Share& s : subset) xs.push_back(s.x);
    check_distinct_nonzero(xs);
    auto rows = rows_of(subset, subset.size());
    return SecretBundle{xor_all_rows(rows)};
  }

  std::vector<std::uint8_t> xs;
  for (std::size_t i = 0; i < params.k; ++i) xs.push_back(subset[i].x);
  check_distinct_nonzero(xs);
  ShamirEngine engine(std::move(xs));
  auto coeff = engine.coefficients(rows_of(subset, params.k));
  return SecretBundle{std::move(coeff[0])};
}

std::vector<Share> derive_other_shares(const SchemeParams& params,
                                       const std::vector<Share>& subset) {
  validate_params(params);
  if (subset.size() < params.k) throw DskeError(ErrorCode::insufficient_shares);
  check_equal_lengths(subset);

  if (params.kind == SchemeKind::xor_all) {
    std::vector<std::uint8_t> xs;
    for (const Share& s : subset) xs.push_back(s.x);
    check_distinct_nonzero(xs);
    return subset;
  }

  std::vector<std::uint8_t> xs;
  for (std::size_t i = 0; i < params.k; ++i) xs.push_back(subset[i].x);
  check_distinct_nonzero(xs);
  ShamirEngine engine(xs);
  auto coeff = engine.coefficients(rows_of(subset, params.k));

  std::vector<Share> out;
  out.reserve(params.n);
  for (std::uint16_t x = 1; x <= params.n; ++x) {
    out.push_back(Share{static_cast<std::uint8_t>(x),
                        ShamirEngine::evaluate(coeff, static_cast<std::uint8_t>(x))});
  }
  return out;
}

}  // namespace dske
