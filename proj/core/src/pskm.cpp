#include "dske/pskm.hpp"

#include <cstring>
#include <fstream>

#include "dske/error.hpp"

namespace dske {

namespace {

constexpr char kMagic[4] = {'D', 'S', 'K', 'E'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 1 + 16 + 16 + 8 + 8;

void append_u64_be(Bytes& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t read_u64_be(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

Bytes serialize_pskm(const PskTable& table) {
  if (!table.fully_unused()) {
    throw DskeError(ErrorCode::bad_params, "refusing to serialize a partially consumed table");
  }
  Bytes out;
  out.reserve(kHeaderSize + table.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kVersion);
  out.insert(out.end(), table.hub_id().bytes.begin(), table.hub_id().bytes.end());
  out.insert(out.end(), table.client_id().bytes.begin(), table.client_id().bytes.end());
  append_u64_be(out, table.table_id());
  append_u64_be(out, table.size());
  ByteView data = table.contents();
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

PskTable parse_pskm(ByteView blob, const std::optional<PartyId>& expect_hub,
                    const std::optional<PartyId>& expect_client) {
  if (blob.size() < 5 || std::memcmp(blob.data(), kMagic, 4) != 0) {
    throw DskeError(ErrorCode::bad_magic);
  }
  if (blob[4] != kVersion) {
    throw DskeError(ErrorCode::bad_magic, "unsupported container version");
  }
  if (blob.size() < kHeaderSize) throw DskeError(ErrorCode::truncated_file);

  PartyId hub, client;
  std::memcpy(hub.bytes.data(), blob.data() + 5, 16);
  std::memcpy(client.bytes.data(), blob.data() + 21, 16);
  std::uint64_t table_id = read_u64_be(blob.data() + 37);
  std::uint64_t length = read_u64_be(blob.data() + 45);
  if (blob.size() - kHeaderSize != length) throw DskeError(ErrorCode::truncated_file);

  if (expect_hub && hub != *expect_hub) {
    throw DskeError(ErrorCode::id_mismatch, "hub id does not match");
  }
  if (expect_client && client != *expect_client) {
    throw DskeError(ErrorCode::id_mismatch, "client id does not match");
  }
  Bytes data(blob.begin() + kHeaderSize, blob.end());
  return PskTable(hub, client, table_id, std::move(data));
}

void write_pskm(const PskTable& table, const std::string& path) {
  Bytes blob = serialize_pskm(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DskeError(ErrorCode::truncated_file, "cannot open " + path);
  out.write(reinterpret_cast<const char*>(blob.data()), blob.size());
  if (!out) throw DskeError(ErrorCode::truncated_file, "short write to " + path);
}

PskTable read_pskm(const std::string& path, const std::optional<PartyId>& expect_hub,
                   const std::optional<PartyId>& expect_client) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DskeError(ErrorCode::truncated_file, "cannot open " + path);
  Bytes blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_pskm(blob, expect_hub, expect_client);
}

}  // namespace dske
