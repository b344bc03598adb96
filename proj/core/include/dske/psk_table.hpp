#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "dske/bytes.hpp"
#include "dske/ids.hpp"

namespace dske {

// Contiguous range read out of a table. The range is marked used before the
// bytes are handed out; no byte index is ever returned twice.
struct KeySlice {
  std::uint64_t table_id = 0;
  std::uint64_t start = 0;
  Bytes bytes;

  std::uint64_t length() const { return bytes.size(); }
};

// One hub<->client table of pre-shared random bytes with single-use
// consumption accounting. Both ends hold their own copy and track their own
// consumption state; the protocol keeps them in step.
//
// All allocation and claiming on one table serializes through an internal
// mutex, so concurrent session handlers can share a table object.
class PskTable {
 public:
  PskTable(PartyId hub, PartyId client, std::uint64_t table_id, Bytes data);

  PskTable(PskTable&&) noexcept = default;
  PskTable& operator=(PskTable&&) noexcept = default;
  PskTable(const PskTable&) = delete;
  PskTable& operator=(const PskTable&) = delete;

  // Next unused range of `length` bytes (first fit). Throws TableExhausted
  // when no gap is large enough.
  KeySlice allocate(std::size_t length);

  // The exact range, which must be entirely unused. Throws OverlapDetected if
  // any byte of it was consumed before, OutOfBounds if it leaves the table.
  KeySlice claim_range(std::uint64_t start, std::size_t length);

  std::size_t size() const { return data_.size(); }
  std::size_t used_bytes() const;
  std::size_t unused_bytes() const { return size() - used_bytes(); }
  bool fully_unused() const { return used_bytes() == 0; }

  const PartyId& hub_id() const { return hub_; }
  const PartyId& client_id() const { return client_; }
  std::uint64_t table_id() const { return table_id_; }

  // Raw table contents. Consumption state is not secrecy: whoever holds the
  // object owns the material.
  ByteView contents() const { return ByteView(data_); }

  // Durable consumption cursor. Replays any committed (start, length) records
  // found at `path`, then appends one record per subsequent allocation,
  // flushed before the bytes are released. A torn trailing record from a
  // crash is ignored.
  void attach_journal(const std::string& path);

 private:
  std::uint64_t first_fit_locked(std::size_t length) const;
  bool range_free_locked(std::uint64_t start, std::size_t length) const;
  void mark_used_locked(std::uint64_t start, std::size_t length);
  void journal_locked(std::uint64_t start, std::size_t length);
  KeySlice take_locked(std::uint64_t start, std::size_t length);

  PartyId hub_;
  PartyId client_;
  std::uint64_t table_id_ = 0;
  Bytes data_;
  std::map<std::uint64_t, std::uint64_t> used_;  // merged intervals, start -> length
  std::unique_ptr<std::mutex> mutex_;
  std::unique_ptr<std::ofstream> journal_;
};

}  // namespace dske
