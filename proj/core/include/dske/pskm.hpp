#pragma once

#include <optional>
#include <string>

#include "dske/psk_table.hpp"

// Pre-shared key module container: the file a hub delivers to a client to
// establish one table. Layout, all integers big-endian:
//
//   magic "DSKE" | version u8 = 1 | hub id (16) | client id (16)
//   | table id u64 | length u64 | raw random bytes
//
// Consumption state is deliberately not part of the file; each party tracks
// its own from zero.

namespace dske {

Bytes serialize_pskm(const PskTable& table);  // requires a fully unused table

PskTable parse_pskm(ByteView blob,
                    const std::optional<PartyId>& expect_hub = std::nullopt,
                    const std::optional<PartyId>& expect_client = std::nullopt);

void write_pskm(const PskTable& table, const std::string& path);

PskTable read_pskm(const std::string& path,
                   const std::optional<PartyId>& expect_hub = std::nullopt,
                   const std::optional<PartyId>& expect_client = std::nullopt);

}  // namespace dske
