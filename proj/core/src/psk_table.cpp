#include "dske/psk_table.hpp"

#include <array>
#include <filesystem>

#include "dske/error.hpp"

namespace dske {

namespace {

void put_u64_be(std::uint8_t* out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(v & 0xFF);
    v >>= 8;
  }
}

std::uint64_t get_u64_be(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

}  // namespace

PskTable::PskTable(PartyId hub, PartyId client, std::uint64_t table_id, Bytes data)
    : hub_(hub),
      client_(client),
      table_id_(table_id),
      data_(std::move(data)),
      mutex_(std::make_unique<std::mutex>()) {}

std::size_t PskTable::used_bytes() const {
  std::lock_guard lock(*mutex_);
  std::size_t total = 0;
  for (const auto& [start, len] : used_) total += len;
  return total;
}

std::uint64_t PskTable::first_fit_locked(std::size_t length) const {
  std::uint64_t cursor = 0;
  for (const auto& [start, len] : used_) {
    if (start - cursor >= length) return cursor;
    cursor = start + len;
  }
  if (data_.size() - cursor >= length) return cursor;
  throw DskeError(ErrorCode::table_exhausted,
                  "table " + std::to_string(table_id_) + " has no free range of " +
                      std::to_string(length) + " bytes");
}

bool PskTable::range_free_locked(std::uint64_t start, std::size_t length) const {
  auto it = used_.upper_bound(start);
  if (it != used_.begin()) {
    auto prev = std::prev(it);
    if (prev->first + prev->second > start) return false;
  }
  if (it != used_.end() && it->first < start + length) return false;
  return true;
}

void PskTable::mark_used_locked(std::uint64_t start, std::size_t length) {
  std::uint64_t new_start = start;
  std::uint64_t new_end = start + length;
  auto it = used_.upper_bound(start);
  if (it != used_.begin()) {
    auto prev = std::prev(it);
    if (prev->first + prev->second == start) {
      new_start = prev->first;
      used_.erase(prev);
    }
  }
  it = used_.find(new_end);
  if (it != used_.end()) {
    new_end = it->first + it->second;
    used_.erase(it);
  }
  used_[new_start] = new_end - new_start;
}

void PskTable::journal_locked(std::uint64_t start, std::size_t length) {
  if (!journal_) return;
  std::array<std::uint8_t, 16> rec;
  put_u64_be(rec.data(), start);
  put_u64_be(rec.data() + 8, length);
  journal_->write(reinterpret_cast<const char*>(rec.data()), rec.size());
  journal_->flush();
  if (!*journal_) {
    throw DskeError(ErrorCode::truncated_file, "journal write failed");
  }
}

KeySlice PskTable::take_locked(std::uint64_t start, std::size_t length) {
  // Commit the consumption record before releasing any bytes, so a crash can
  // never lead to reuse.
  journal_locked(start, length);
  mark_used_locked(start, length);
  KeySlice slice;
  slice.table_id = table_id_;
  slice.start = start;
  slice.bytes.assign(data_.begin() + start, data_.begin() + start + length);
  return slice;
}

KeySlice PskTable::allocate(std::size_t length) {
  if (length == 0) throw DskeError(ErrorCode::bad_params, "zero-length allocation");
  std::lock_guard lock(*mutex_);
  std::uint64_t start = first_fit_locked(length);
  return take_locked(start, length);
}

KeySlice PskTable::claim_range(std::uint64_t start, std::size_t length) {
  if (length == 0) throw DskeError(ErrorCode::bad_params, "zero-length claim");
  std::lock_guard lock(*mutex_);
  if (start > data_.size() || length > data_.size() - start) {
    throw DskeError(ErrorCode::out_of_bounds,
                    "claim [" + std::to_string(start) + ", +" + std::to_string(length) +
                        ") outside table of " + std::to_string(data_.size()));
  }
  if (!range_free_locked(start, length)) {
    throw DskeError(ErrorCode::overlap_detected,
                    "claim [" + std::to_string(start) + ", +" + std::to_string(length) +
                        ") overlaps consumed bytes");
  }
  return take_locked(start, length);
}

void PskTable::attach_journal(const std::string& path) {
  std::lock_guard lock(*mutex_);
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DskeError(ErrorCode::truncated_file, "cannot open journal " + path);
    std::array<std::uint8_t, 16> rec;
    while (in.read(reinterpret_cast<char*>(rec.data()), rec.size())) {
      std::uint64_t start = get_u64_be(rec.data());
      std::uint64_t length = get_u64_be(rec.data() + 8);
      if (start > data_.size() || length > data_.size() - start) {
        throw DskeError(ErrorCode::truncated_file, "journal record out of bounds");
      }
      if (!range_free_locked(start, length)) {
        throw DskeError(ErrorCode::truncated_file, "journal records overlap");
      }
      mark_used_locked(start, length);
    }
    // A short final read is a torn record from an interrupted write; the
    // corresponding bytes were never released, so dropping it is safe.
  }
  journal_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::app);
  if (!*journal_) throw DskeError(ErrorCode::truncated_file, "cannot append to journal " + path);
}

}  // namespace dske
